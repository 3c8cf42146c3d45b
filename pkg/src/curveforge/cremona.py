"""Cremona transformations and the reduction to hyperelliptic normal form.

The maps used are the degenerate quadratic map
phi_c : (x, y, z) -> (x*y, y^2, x*(z - c*x)), the curve-dependent reduction
maps Phi = (x*y^(d-2), y^(d-1), F*z + G) and Psi = (x*S, y*S, y^s*z), the
coordinate swap iota = (x, z, y), and arbitrary linear changes.  Strict
transforms substitute the inverse map and divide out the exceptional forms
to maximal order.

A curve of genus g >= 1 whose discriminant splits over the rationals reduces
to y^2 = prod (x - lambda_i) with exactly 2g+2 distinct branch points; the
remaining coordinate freedom is a Moebius map on the branch set, decided
exactly by :func:`pgl2_equivalent`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations

from .analysis import CurveEquation, analyze, discriminant
from .errors import (
    ExceptionalInput,
    GenusZero,
    IndeterminatePoint,
    NonSplitDiscriminant,
    NotDivisible,
    SizeMismatch,
)
from .poly import (
    HomPoly,
    InfinityRoot,
    IrreducibleFactor,
    RationalRoot,
    TriPoly,
    div_exact,
    format_hompoly,
    product_of_forms,
    squarefree_factor,
    tripoly_div_exact,
)

_X = TriPoly(1, (HomPoly(1, (Fraction(1), Fraction(0))),))
_Y = TriPoly(1, (HomPoly(1, (Fraction(0), Fraction(1))),))
_Z = TriPoly(1, (HomPoly.zero(1), HomPoly.constant(1)))


def _tri(p: HomPoly) -> TriPoly:
    return TriPoly.from_hompoly(p)


@dataclass(frozen=True)
class CremonaMap:
    """A birational self-map given by forward/backward coordinate triples.

    On construction the compositions backward o forward and
    forward o backward are checked to be the identity as rational maps
    (proportional to (x, y, z) by a common polynomial factor).
    """

    name: str
    forward: tuple[TriPoly, TriPoly, TriPoly]
    backward: tuple[TriPoly, TriPoly, TriPoly]
    exceptional_forms: tuple[TriPoly, ...] = field(default_factory=tuple)

    def __post_init__(self):
        for first, second in ((self.forward, self.backward), (self.backward, self.forward)):
            comp = tuple(b.compose(first) for b in second)
            if not (
                (comp[0] * _Y - comp[1] * _X).is_zero()
                and (comp[0] * _Z - comp[2] * _X).is_zero()
            ):
                raise ValueError(f"map {self.name!r}: inverse check failed")


def identity_map() -> CremonaMap:
    return CremonaMap("identity", (_X, _Y, _Z), (_X, _Y, _Z))


def phi_c(c) -> CremonaMap:
    """(x, y, z) -> (x*y, y^2, x*(z - c*x)); inverse (x^2, x*y, y*z + c*x^2)."""
    c = Fraction(c)
    fwd_z = _X * _Z - (_X * _X).scale(c)
    bwd_z = _Y * _Z + (_X * _X).scale(c)
    return CremonaMap(
        f"phi_c(c={c})",
        (_X * _Y, _Y * _Y, fwd_z),
        (_X * _X, _X * _Y, bwd_z),
        (_tri(HomPoly(1, (Fraction(1), Fraction(0)))), _tri(HomPoly(1, (Fraction(0), Fraction(1))))),
    )


def phi_reduction(curve: CurveEquation) -> CremonaMap:
    """(x, y, z) -> (x*y^(d-2), y^(d-1), F*z + G), inverse (x*F, y*F, y^(d-2)*z - G)."""
    d = curve.d
    y_pow = HomPoly.from_uni(d - 2, [Fraction(1)])
    fwd = (
        _X * _tri(y_pow),
        _Y * _tri(y_pow),
        _tri(curve.F) * _Z + _tri(curve.G),
    )
    bwd = (
        _X * _tri(curve.F),
        _Y * _tri(curve.F),
        _tri(y_pow) * _Z - _tri(curve.G),
    )
    exceptional = (_tri(curve.F), _tri(HomPoly(1, (Fraction(0), Fraction(1)))))
    return CremonaMap(f"Phi(d={d})", fwd, bwd, exceptional)


def psi_reduction(S: HomPoly, s: int) -> CremonaMap:
    """(x, y, z) -> (x*S, y*S, y^s*z), inverse (x*y^s, y^(s+1), S*z)."""
    y_s = HomPoly.from_uni(s, [Fraction(1)])
    y_s1 = HomPoly.from_uni(s + 1, [Fraction(1)])
    fwd = (_X * _tri(S), _Y * _tri(S), _tri(y_s) * _Z)
    bwd = (_X * _tri(y_s), _tri(y_s1), _tri(S) * _Z)
    exceptional = (_tri(S), _tri(HomPoly(1, (Fraction(0), Fraction(1)))))
    return CremonaMap(f"Psi(s={s})", fwd, bwd, exceptional)


def swap_yz() -> CremonaMap:
    return CremonaMap("iota", (_X, _Z, _Y), (_X, _Z, _Y))


def apply_point(m: CremonaMap, pt) -> tuple:
    """Image of a projective point, normalized to coprime integers with the
    first nonzero coordinate positive."""
    x, y, z = (Fraction(v) for v in pt)
    img = [comp.evaluate(x, y, z) for comp in m.forward]
    if all(v == 0 for v in img):
        raise IndeterminatePoint(f"{m.name} is undefined at ({x}, {y}, {z})")
    from math import gcd, lcm

    den = 1
    for v in img:
        den = lcm(den, v.denominator)
    ints = [int(v * den) for v in img]
    g = 0
    for v in ints:
        g = gcd(g, v)
    ints = [v // g for v in ints]
    lead = next(v for v in ints if v != 0)
    if lead < 0:
        ints = [-v for v in ints]
    return tuple(ints)


def strict_transform(p: TriPoly, m: CremonaMap) -> TriPoly:
    """Pull back along the inverse map and divide out exceptional components."""
    for form in m.exceptional_forms:
        try:
            tripoly_div_exact(p, form)
        except NotDivisible:
            continue
        quotient = p
        while True:
            try:
                quotient = tripoly_div_exact(quotient, form)
            except NotDivisible:
                break
        if quotient.degree == 0:
            raise ExceptionalInput("input is a power of an exceptional form")
    pullback = p.compose(m.backward)
    out = pullback
    for form in m.exceptional_forms:
        while True:
            try:
                out = tripoly_div_exact(out, form)
            except NotDivisible:
                break
    if out.degree == 0:
        raise ExceptionalInput("strict transform collapsed to a constant")
    return out.canonical()


# ---------------------------------------------------------------------------
# reduction to normal form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NormalForm:
    g: int
    branch_points: tuple[Fraction, ...]
    transform_log: tuple[dict, ...]

    def to_json(self) -> dict:
        return {
            "genus": self.g,
            "branch_points": [str(v) for v in self.branch_points],
            "transform_log": [dict(entry) for entry in self.transform_log],
        }


def _split_discriminant(delta: HomPoly) -> list[tuple[Fraction, int]]:
    """(root, multiplicity) pairs; requires all roots rational and finite."""
    out = []
    for root, mult in squarefree_factor(delta):
        if isinstance(root, IrreducibleFactor):
            raise NonSplitDiscriminant(
                f"discriminant has a non-rational factor {format_hompoly(root.poly)}"
            )
        if isinstance(root, InfinityRoot):
            raise NonSplitDiscriminant("discriminant still vanishes at infinity")
        out.append((root.value, mult))
    return sorted(out)


def reduce_to_normal_form(c: CurveEquation) -> NormalForm:
    """Theorem-2 pipeline: shear so y divides neither F nor the discriminant,
    apply Phi (giving y^(2(d-2)) z^2 = Delta), split off square factors with
    Psi, swap coordinates, and read the 2g+2 branch points."""
    rep = analyze(c)
    g = rep.genus
    if g == 0:
        raise GenusZero("normal form y^2 = prod(x - lambda_i) needs genus >= 1")
    delta0 = discriminant(c)
    for root, _ in squarefree_factor(delta0):
        if isinstance(root, IrreducibleFactor):
            raise NonSplitDiscriminant(
                f"discriminant has a non-rational factor {format_hompoly(root.poly)}"
            )
    log: list[dict] = []

    shear = None
    for k in range(0, 100):
        for cand in ({0} if k == 0 else {k, -k}):
            if c.F.evaluate(1, cand) != 0 and delta0.evaluate(1, cand) != 0:
                shear = Fraction(cand)
                break
        if shear is not None:
            break
    assert shear is not None, "only finitely many shear values are excluded"
    sheared = c.change_xy(((1, 0), (shear, 1))) if shear != 0 else c
    log.append({"map": "shear", "c": str(shear)})
    delta = discriminant(sheared)

    phi = phi_reduction(sheared)
    transformed = strict_transform(sheared.defining_polynomial(), phi)
    d = c.d
    y2d4 = HomPoly.from_uni(2 * (d - 2), [Fraction(1)])
    expected = TriPoly(2 * d - 2, (-delta, HomPoly.zero(2 * d - 3), y2d4)).canonical()
    assert transformed == expected, "Phi strict transform differs from y^(2(d-2)) z^2 = Delta"
    log.append({"map": "Phi", "d": d})

    roots = _split_discriminant(delta)
    s_parts = [(HomPoly(1, (Fraction(1), -lam)), q // 2) for lam, q in roots if q >= 2]
    S = product_of_forms(s_parts)
    s = sum(q // 2 for _, q in roots)
    odd_roots = [lam for lam, q in roots if q % 2 == 1]
    l = len(odd_roots)
    if 2 * d - 2 != 2 * s + l:
        raise NonSplitDiscriminant("multiplicity bookkeeping failed: 2d-2 != 2s+l")
    if l != 2 * g + 2 or g != d - s - 2:
        raise NonSplitDiscriminant(
            f"reduction invariants failed: l={l}, 2g+2={2 * g + 2}, d-s-2={d - s - 2}"
        )

    psi = psi_reduction(S, s)
    gamma_prime = strict_transform(transformed, psi)
    pi_odd = product_of_forms([(HomPoly(1, (Fraction(1), -lam)), 1) for lam in odd_roots])
    # the discriminant is not monic: Delta = unit * S^2 * Pi, and the unit
    # survives as a quadratic twist y^(2g) z^2 = unit * Pi (same branch set)
    unit_poly = div_exact(delta, S * S * pi_odd)
    assert unit_poly.degree == 0
    unit = unit_poly.coeffs[0]
    y2g = HomPoly.from_uni(2 * g, [Fraction(1)])
    expected2 = TriPoly(
        2 * g + 2, (pi_odd.scale(-unit), HomPoly.zero(2 * g + 1), y2g)
    ).canonical()
    assert gamma_prime == expected2, "Psi strict transform differs from y^(2g) z^2 = unit * prod"
    log.append({"map": "Psi", "s": s})

    gamma = strict_transform(gamma_prime, swap_yz())
    assert gamma.z_degree() == 2 * g
    log.append({"map": "iota"})

    return NormalForm(g, tuple(sorted(odd_roots)), tuple(log))


# ---------------------------------------------------------------------------
# Moebius equivalence of branch sets
# ---------------------------------------------------------------------------


class _Inf:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "inf"


INF = _Inf()


def _as_pt(v):
    if v is INF:
        return (Fraction(1), Fraction(0))
    return (Fraction(v), Fraction(1))


def _normalize(v):
    return INF if v is INF else Fraction(v)


def _triple_matrix(a1, a2, a3):
    """Matrix of the Moebius map sending (a1, a2, a3) to (0, 1, inf)."""
    if a1 is INF:
        return ((Fraction(0), a2 - a3), (Fraction(1), -a3))
    if a2 is INF:
        return ((Fraction(1), -a1), (Fraction(1), -a3))
    if a3 is INF:
        return ((Fraction(1), -a1), (Fraction(0), a2 - a1))
    return ((a2 - a3, -a1 * (a2 - a3)), (a2 - a1, -a3 * (a2 - a1)))


def _mat_mul(m, n):
    return (
        (m[0][0] * n[0][0] + m[0][1] * n[1][0], m[0][0] * n[0][1] + m[0][1] * n[1][1]),
        (m[1][0] * n[0][0] + m[1][1] * n[1][0], m[1][0] * n[0][1] + m[1][1] * n[1][1]),
    )


def _mat_inv(m):
    return ((m[1][1], -m[0][1]), (-m[1][0], m[0][0]))


def _apply_moebius(m, v):
    x, w = _as_pt(v)
    num = m[0][0] * x + m[0][1] * w
    den = m[1][0] * x + m[1][1] * w
    if den == 0:
        if num == 0:
            raise ZeroDivisionError("degenerate Moebius matrix")
        return INF
    return num / den


def pgl2_equivalent(a, b) -> bool:
    """Whether a Moebius map over the rationals carries the set a onto b.

    Elements are rationals or INF; both sets must have the same size >= 3
    with distinct elements.  Decided by brute force: a Moebius map is pinned
    by any ordered triple correspondence, so all triples of a are mapped to
    a fixed triple of b and the image set compared.
    """
    aset = [_normalize(v) for v in a]
    bset = [_normalize(v) for v in b]
    if len(set(map(repr, aset))) != len(aset) or len(set(map(repr, bset))) != len(bset):
        raise SizeMismatch("branch sets must consist of distinct values")
    if len(aset) != len(bset):
        raise SizeMismatch(f"sizes differ: {len(aset)} vs {len(bset)}")
    if len(aset) < 3:
        raise SizeMismatch("need at least 3 points")
    b_keys = {repr(v) for v in bset}
    target = _triple_matrix(bset[0], bset[1], bset[2])
    target_inv = _mat_inv(target)
    for triple in permutations(aset, 3):
        m = _mat_mul(target_inv, _triple_matrix(*triple))
        try:
            image = {repr(_apply_moebius(m, v)) for v in aset}
        except ZeroDivisionError:
            continue
        if image == b_keys:
            return True
    return False
