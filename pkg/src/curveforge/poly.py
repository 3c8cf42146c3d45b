"""Exact homogeneous polynomial algebra over the rationals.

Two carriers:

* :class:`HomPoly` -- a homogeneous bivariate polynomial in (x, y), stored
  densely: ``coeffs[h]`` is the coefficient of ``x^(n-h) * y^h``.
* :class:`TriPoly` -- a homogeneous trivariate polynomial in (x, y, z),
  stored as z-layers of HomPoly values (used for defining polynomials and
  Cremona pullbacks).

Roots of a HomPoly live in P^1 and are described by :class:`RationalRoot`
(the point (a, 1), linear form ``x - a*y``), :class:`InfinityRoot` (the
point (1, 0), form ``y``) or :class:`IrreducibleFactor` (a primitive
squarefree factor without rational roots; its deg-many conjugate roots share
every multiplicity we care about).

Everything is immutable and exact; there is no floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .errors import (
    DegreeMismatch,
    InputSyntaxError,
    NotDivisible,
    NotHomogeneous,
    SingularMatrix,
    ZeroPolynomial,
)
from .numth import divisors

Rat = Fraction

# ---------------------------------------------------------------------------
# dense univariate helpers (ascending coefficient lists over Fraction)
# ---------------------------------------------------------------------------


def uni_trim(u: list[Fraction]) -> list[Fraction]:
    while u and u[-1] == 0:
        u.pop()
    return u


def uni_deg(u: list[Fraction]) -> int:
    return len(u) - 1


def uni_add(a, b):
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    return uni_trim(out)


def uni_sub(a, b):
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] -= c
    return uni_trim(out)


def uni_scale(a, s: Fraction):
    if s == 0:
        return []
    return [c * s for c in a]


def uni_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, c in enumerate(a):
        if c == 0:
            continue
        for j, d in enumerate(b):
            if d != 0:
                out[i + j] += c * d
    return uni_trim(out)


def uni_divmod(a, b):
    if not b:
        raise ZeroDivisionError("univariate division by zero polynomial")
    r = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(r) >= len(b) and r:
        c = r[-1] / lead
        k = len(r) - len(b)
        q[k] = c
        for i, d in enumerate(b):
            r[k + i] -= c * d
        uni_trim(r)
    return uni_trim(q), r


def uni_deriv(a):
    return uni_trim([a[i] * i for i in range(1, len(a))])


def uni_monic(a):
    if not a:
        return []
    lead = a[-1]
    return [c / lead for c in a]


def uni_gcd(a, b):
    a, b = list(a), list(b)
    while b:
        _, r = uni_divmod(a, b)
        a, b = b, r
    return uni_monic(a)


def uni_eval(a, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


def uni_primitive_int(a) -> list[int]:
    """Scale a nonzero Fraction poly to coprime integers (sign preserved)."""
    den = 1
    for c in a:
        den = lcm(den, c.denominator)
    ints = [int(c * den) for c in a]
    g = 0
    for c in ints:
        g = gcd(g, c)
    return [c // g for c in ints]


def uni_shift(a, t: Fraction):
    """Coefficients of a(T + t)."""
    out = list(a)
    # synthetic Taylor shift
    n = len(out)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            out[j] += out[j + 1] * t
    return uni_trim(out)


def uni_xgcd(a, b):
    """Extended gcd: returns (g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = list(a), list(b)
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while r1:
        q, r = uni_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, uni_sub(s0, uni_mul(q, s1))
        t0, t1 = t1, uni_sub(t0, uni_mul(q, t1))
    if not r0:
        return [], s0, t0
    lead = r0[-1]
    inv = 1 / lead
    return uni_scale(r0, inv), uni_scale(s0, inv), uni_scale(t0, inv)


def uni_yun(u):
    """Yun squarefree decomposition: list of (squarefree part, multiplicity)."""
    out = []
    g = uni_gcd(u, uni_deriv(u))
    if uni_deg(g) == 0:
        return [(uni_monic(u), 1)]
    c, r = uni_divmod(u, g)
    assert not r
    w, r = uni_divmod(uni_deriv(u), g)
    assert not r
    i = 1
    while uni_deg(c) > 0:
        y = uni_sub(w, uni_deriv(c))
        s = uni_gcd(c, y)
        if uni_deg(s) > 0:
            out.append((s, i))
        c, r = uni_divmod(c, s)
        assert not r
        w, r = uni_divmod(y, s)
        assert not r
        i += 1
    return out


def uni_rational_roots(u) -> list[Fraction]:
    """Rational roots of a squarefree poly with nonzero constant term."""
    ints = uni_primitive_int(u)
    roots = []
    lead, const = ints[-1], ints[0]
    seen = set()
    for r in divisors(const):
        for s in divisors(lead):
            if gcd(r, s) != 1:
                continue
            for cand in (Fraction(r, s), Fraction(-r, s)):
                if cand in seen:
                    continue
                seen.add(cand)
                acc = 0
                sp = 1
                num, den = cand.numerator, cand.denominator
                for c in reversed(ints):
                    acc = acc * num + c * sp
                    sp *= den
                if acc == 0:
                    roots.append(cand)
    return sorted(roots)


# ---------------------------------------------------------------------------
# HomPoly
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HomPoly:
    """Homogeneous polynomial in (x, y) of a declared degree.

    The zero polynomial keeps its declared degree so ring operations stay
    total.  ``coeffs[h]`` is the coefficient of ``x^(degree-h) * y^h``.
    """

    degree: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("degree must be nonnegative")
        if len(self.coeffs) != self.degree + 1:
            raise ValueError("coeffs length must be degree+1")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero(degree: int = 0) -> HomPoly:
        return HomPoly(degree, (Fraction(0),) * (degree + 1))

    @staticmethod
    def constant(c) -> HomPoly:
        return HomPoly(0, (Fraction(c),))

    @staticmethod
    def from_uni(degree: int, u: list[Fraction]) -> HomPoly:
        """Homogenize an ascending univariate in T = x/y to the given degree."""
        if uni_deg(u) > degree:
            raise ValueError("univariate degree exceeds homogeneous degree")
        coeffs = [Fraction(0)] * (degree + 1)
        for j, c in enumerate(u):
            coeffs[degree - j] = c
        return HomPoly(degree, tuple(coeffs))

    # -- views ---------------------------------------------------------------

    def uni(self) -> list[Fraction]:
        """Dehomogenization p(T, 1) as an ascending coefficient list."""
        return uni_trim([self.coeffs[self.degree - j] for j in range(self.degree + 1)])

    def uni_x(self) -> list[Fraction]:
        """Dehomogenization p(1, S) as an ascending coefficient list."""
        return uni_trim(list(self.coeffs))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def leading(self) -> Fraction:
        """First nonzero coefficient in x-descending order (0 for zero poly)."""
        for c in self.coeffs:
            if c != 0:
                return c
        return Fraction(0)

    # -- ring operations -----------------------------------------------------

    def __add__(self, other: HomPoly) -> HomPoly:
        if self.degree != other.degree:
            raise DegreeMismatch(f"add: degrees {self.degree} != {other.degree}")
        return HomPoly(self.degree, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: HomPoly) -> HomPoly:
        if self.degree != other.degree:
            raise DegreeMismatch(f"sub: degrees {self.degree} != {other.degree}")
        return HomPoly(self.degree, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> HomPoly:
        return HomPoly(self.degree, tuple(-a for a in self.coeffs))

    def __mul__(self, other: HomPoly) -> HomPoly:
        n = self.degree + other.degree
        out = [Fraction(0)] * (n + 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b != 0:
                    out[i + j] += a * b
        return HomPoly(n, tuple(out))

    def scale(self, s) -> HomPoly:
        s = Fraction(s)
        return HomPoly(self.degree, tuple(c * s for c in self.coeffs))

    def __pow__(self, k: int) -> HomPoly:
        if k < 0:
            raise ValueError("negative power")
        out = HomPoly.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def evaluate(self, x, y) -> Fraction:
        x, y = Fraction(x), Fraction(y)
        acc = Fraction(0)
        for h, c in enumerate(self.coeffs):
            if c != 0:
                acc += c * x ** (self.degree - h) * y**h
        return acc

    # -- normal forms ---------------------------------------------------------

    def canonical(self) -> HomPoly:
        """Primitive integer form with positive leading coefficient."""
        if self.is_zero():
            return HomPoly.zero(self.degree)
        ints = uni_primitive_int(list(self.coeffs))
        lead = next(c for c in ints if c != 0)
        if lead < 0:
            ints = [-c for c in ints]
        return HomPoly(self.degree, tuple(Fraction(c) for c in ints))

    def is_scalar_multiple_of(self, other: HomPoly) -> bool:
        if self.degree != other.degree:
            return False
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        return self.canonical() == other.canonical()

    def __str__(self) -> str:
        return format_hompoly(self)


def div_exact(a: HomPoly, b: HomPoly) -> HomPoly:
    """Exact quotient a / b; raises NotDivisible when the division fails."""
    if b.is_zero():
        raise ZeroPolynomial("division by the zero polynomial")
    if a.is_zero():
        return HomPoly.zero(max(a.degree - b.degree, 0))
    if a.degree < b.degree:
        raise NotDivisible(f"degree {a.degree} < {b.degree}")
    ua, ub = a.uni(), b.uni()
    ya = a.degree - uni_deg(ua)
    yb = b.degree - uni_deg(ub)
    if yb > ya:
        raise NotDivisible("divisor has a higher power of y")
    q, r = uni_divmod(ua, ub)
    if r:
        raise NotDivisible("nonzero remainder")
    return HomPoly.from_uni(a.degree - b.degree, q)


def gcd_poly(a: HomPoly, b: HomPoly) -> HomPoly:
    """Primitive positive-leading gcd of two homogeneous polynomials."""
    if a.is_zero() and b.is_zero():
        raise ZeroPolynomial("gcd(0, 0)")
    if a.is_zero():
        return b.canonical()
    if b.is_zero():
        return a.canonical()
    ua, ub = a.uni(), b.uni()
    ya = a.degree - uni_deg(ua)
    yb = b.degree - uni_deg(ub)
    g = uni_gcd(ua, ub)
    return HomPoly.from_uni(uni_deg(g) + min(ya, yb), g).canonical()


# ---------------------------------------------------------------------------
# root descriptors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RationalRoot:
    """The point (value, 1) in P^1; linear form x - value*y."""

    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))

    def form(self) -> HomPoly:
        return HomPoly(1, (Fraction(1), -self.value))

    def sort_key(self):
        return (0, self.value, "")

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class InfinityRoot:
    """The point (1, 0) in P^1; linear form y."""

    def form(self) -> HomPoly:
        return HomPoly(1, (Fraction(0), Fraction(1)))

    def sort_key(self):
        return (1, Fraction(0), "")

    def __str__(self):
        return "inf"


@dataclass(frozen=True)
class IrreducibleFactor:
    """A primitive squarefree factor of degree >= 2 with no rational roots.

    Stands for its deg-many conjugate roots, which share all multiplicities.
    Full irreducibility over Q is not certified; factors are refined until
    they are pairwise coprime across every polynomial under consideration,
    which is what the multiplicity bookkeeping needs.
    """

    poly: HomPoly

    def form(self) -> HomPoly:
        return self.poly

    @property
    def degree(self) -> int:
        return self.poly.degree

    def sort_key(self):
        return (2, Fraction(self.poly.degree), format_hompoly(self.poly))

    def __str__(self):
        return format_hompoly(self.poly)


RootDesc = RationalRoot | InfinityRoot | IrreducibleFactor


def ord_at(p: HomPoly, root: RootDesc) -> int:
    """Largest m such that the form of ``root`` to the m-th power divides p."""
    if p.is_zero():
        raise ZeroPolynomial("ord_at on the zero polynomial")
    u = p.uni()
    if isinstance(root, InfinityRoot):
        return p.degree - uni_deg(u)
    if isinstance(root, RationalRoot):
        m = 0
        t = root.value
        while u and uni_eval(u, t) == 0:
            q, r = uni_divmod(u, [-t, Fraction(1)])
            assert not r
            u = q
            m += 1
        return m
    uf = root.poly.uni()
    m = 0
    while u:
        q, r = uni_divmod(u, uf)
        if r:
            return m
        u = q
        m += 1
    return m


def squarefree_factor(p: HomPoly) -> list[tuple[RootDesc, int]]:
    """Complete factorization into pairwise-distinct root descriptors.

    Rational roots (including x and y factors) are extracted exactly via the
    rational root theorem; each residual squarefree cofactor is kept whole as
    an :class:`IrreducibleFactor`.  The product of form^multiplicity equals p
    up to a nonzero rational constant.
    """
    if p.is_zero():
        raise ZeroPolynomial("squarefree_factor on the zero polynomial")
    out: list[tuple[RootDesc, int]] = []
    u = p.uni()
    y_mult = p.degree - uni_deg(u)
    if y_mult > 0:
        out.append((InfinityRoot(), y_mult))
    x_mult = 0
    while u and u[0] == 0:
        u = u[1:]
        x_mult += 1
    if x_mult > 0:
        out.append((RationalRoot(Fraction(0)), x_mult))
    if uni_deg(u) <= 0:
        return out
    for part, mult in uni_yun(u):
        rest = part
        for alpha in uni_rational_roots(part):
            out.append((RationalRoot(alpha), mult))
            q, r = uni_divmod(rest, [-alpha, Fraction(1)])
            assert not r
            rest = q
        if uni_deg(rest) >= 1:
            out.append(
                (IrreducibleFactor(HomPoly.from_uni(uni_deg(rest), rest).canonical()), mult)
            )
    return out


def coprime_refine(polys: list[HomPoly]) -> list[HomPoly]:
    """Split squarefree canonical polynomials into a pairwise-coprime basis."""
    basis: list[HomPoly] = []
    queue = [p.canonical() for p in polys if p.degree > 0]
    while queue:
        f = queue.pop()
        i = 0
        while i < len(basis) and f.degree > 0:
            g = basis[i]
            h = gcd_poly(f, g)
            if h.degree == 0:
                i += 1
                continue
            basis.pop(i)
            basis.append(h)
            rem_g = div_exact(g, h).canonical()
            if rem_g.degree > 0:
                queue.append(rem_g)
            f = div_exact(f, h).canonical()
            i = 0
        if f.degree > 0 and not any(f == b for b in basis):
            basis.append(f)
    return sorted(basis, key=lambda b: (b.degree, format_hompoly(b)))


def substitute_linear(p: HomPoly, matrix) -> HomPoly:
    """Apply x -> m00*x + m01*y, y -> m10*x + m11*y (matrix invertible)."""
    (a, b), (c, d) = matrix
    a, b, c, d = Fraction(a), Fraction(b), Fraction(c), Fraction(d)
    if a * d - b * c == 0:
        raise SingularMatrix("2x2 substitution matrix is singular")
    lx = HomPoly(1, (a, b))
    ly = HomPoly(1, (c, d))
    n = p.degree
    out = HomPoly.zero(n)
    px = [HomPoly.constant(1)]
    py = [HomPoly.constant(1)]
    for _ in range(n):
        px.append(px[-1] * lx)
        py.append(py[-1] * ly)
    for h, coeff in enumerate(p.coeffs):
        if coeff == 0:
            continue
        term = (px[n - h] * py[h]).scale(coeff)
        out = out + term
    return out


def product_of_forms(factors: list[tuple[HomPoly, int]], scalar=1) -> HomPoly:
    """scalar * prod(form^mult)."""
    out = HomPoly.constant(scalar)
    for form, mult in factors:
        for _ in range(mult):
            out = out * form
    return out


# ---------------------------------------------------------------------------
# TriPoly
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TriPoly:
    """Homogeneous polynomial in (x, y, z), stored as z-layers.

    ``layers[k]`` is the HomPoly coefficient of z^k (degree ``degree - k``).
    Trailing all-zero layers are trimmed, except a single layer is kept for
    the zero polynomial.
    """

    degree: int
    layers: tuple[HomPoly, ...]

    def __post_init__(self):
        layers = list(self.layers)
        while len(layers) > 1 and layers[-1].is_zero():
            layers.pop()
        for k, layer in enumerate(layers):
            if layer.degree != self.degree - k:
                raise ValueError("layer degree mismatch")
        object.__setattr__(self, "layers", tuple(layers))

    @staticmethod
    def zero(degree: int = 0) -> TriPoly:
        return TriPoly(degree, (HomPoly.zero(degree),))

    @staticmethod
    def from_hompoly(p: HomPoly) -> TriPoly:
        return TriPoly(p.degree, (p,))

    @staticmethod
    def from_layers(degree: int, layers: list[HomPoly]) -> TriPoly:
        return TriPoly(degree, tuple(layers))

    def z_degree(self) -> int:
        return len(self.layers) - 1

    def is_zero(self) -> bool:
        return all(layer.is_zero() for layer in self.layers)

    def layer(self, k: int) -> HomPoly:
        if k < len(self.layers):
            return self.layers[k]
        return HomPoly.zero(self.degree - k)

    def __add__(self, other: TriPoly) -> TriPoly:
        if self.degree != other.degree:
            raise DegreeMismatch("TriPoly add: degree mismatch")
        n = max(len(self.layers), len(other.layers))
        return TriPoly(self.degree, tuple(self.layer(k) + other.layer(k) for k in range(n)))

    def __sub__(self, other: TriPoly) -> TriPoly:
        return self + (-other)

    def __neg__(self) -> TriPoly:
        return TriPoly(self.degree, tuple(-layer for layer in self.layers))

    def __mul__(self, other: TriPoly) -> TriPoly:
        n = self.degree + other.degree
        zd = self.z_degree() + other.z_degree()
        out = [HomPoly.zero(n - k) for k in range(zd + 1)]
        for i, a in enumerate(self.layers):
            if a.is_zero():
                continue
            for j, b in enumerate(other.layers):
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return TriPoly(n, tuple(out))

    def scale(self, s) -> TriPoly:
        return TriPoly(self.degree, tuple(layer.scale(s) for layer in self.layers))

    def __pow__(self, k: int) -> TriPoly:
        out = TriPoly.from_hompoly(HomPoly.constant(1))
        for _ in range(k):
            out = out * self
        return out

    def evaluate(self, x, y, z) -> Fraction:
        z = Fraction(z)
        acc = Fraction(0)
        for k, layer in enumerate(self.layers):
            acc += layer.evaluate(x, y) * z**k
        return acc

    def compose(self, triple: tuple[TriPoly, TriPoly, TriPoly]) -> TriPoly:
        """Substitute (X, Y, Z) for (x, y, z); components must share a degree."""
        X, Y, Z = triple
        m = X.degree
        if Y.degree != m or Z.degree != m:
            raise DegreeMismatch("substitution components must have equal degrees")
        n = self.degree
        px = [TriPoly.from_hompoly(HomPoly.constant(1))]
        py = [TriPoly.from_hompoly(HomPoly.constant(1))]
        pz = [TriPoly.from_hompoly(HomPoly.constant(1))]
        for _ in range(n):
            px.append(px[-1] * X)
            py.append(py[-1] * Y)
            pz.append(pz[-1] * Z)
        out = TriPoly.zero(n * m)
        for k, layer in enumerate(self.layers):
            if layer.is_zero():
                continue
            d = layer.degree
            for h, coeff in enumerate(layer.coeffs):
                if coeff == 0:
                    continue
                term = (px[d - h] * py[h] * pz[k]).scale(coeff)
                out = out + term
        return out

    def substitute_linear(self, matrix) -> TriPoly:
        """Apply an invertible 3x3 rational matrix to the variable column."""
        rows = [[Fraction(v) for v in row] for row in matrix]
        det = (
            rows[0][0] * (rows[1][1] * rows[2][2] - rows[1][2] * rows[2][1])
            - rows[0][1] * (rows[1][0] * rows[2][2] - rows[1][2] * rows[2][0])
            + rows[0][2] * (rows[1][0] * rows[2][1] - rows[1][1] * rows[2][0])
        )
        if det == 0:
            raise SingularMatrix("3x3 substitution matrix is singular")
        comps = tuple(
            TriPoly(
                1,
                (HomPoly(1, (row[0], row[1])), HomPoly.constant(row[2])),
            )
            for row in rows
        )
        return self.compose(comps)

    def canonical(self) -> TriPoly:
        """Primitive integer form, positive first coefficient in lex order."""
        if self.is_zero():
            return TriPoly.zero(self.degree)
        coeffs = [c for layer in self.layers for c in layer.coeffs if c != 0]
        scaled = uni_primitive_int(coeffs)
        factor = scaled[0] / coeffs[0]
        p = self.scale(factor)
        lead = _tripoly_lead(p)
        if lead < 0:
            p = p.scale(-1)
        return p

    def __str__(self) -> str:
        return format_tripoly(self)


def _tripoly_lead(p: TriPoly) -> Fraction:
    best = None
    lead = Fraction(0)
    for k, layer in enumerate(p.layers):
        for h, c in enumerate(layer.coeffs):
            if c == 0:
                continue
            ex, ey = layer.degree - h, h
            key = (-ex, -ey, -k)
            if best is None or key < best:
                best = key
                lead = c
    return lead


def tripoly_div_exact(p: TriPoly, d: TriPoly) -> TriPoly:
    """Exact trivariate division (raises NotDivisible on failure)."""
    if d.is_zero():
        raise ZeroPolynomial("division by the zero polynomial")
    if p.is_zero():
        return TriPoly.zero(max(p.degree - d.degree, 0))
    if p.degree < d.degree:
        raise NotDivisible("degree too small")
    zd = d.z_degree()
    dt = d.layers[zd]
    if dt.is_zero():
        raise NotDivisible("divisor has zero top layer")
    work = [p.layer(k) for k in range(p.z_degree() + 1)]
    nq = p.degree - d.degree
    qlayers = [HomPoly.zero(nq - k) for k in range(max(p.z_degree() - zd, 0) + 1)]
    top = len(work) - 1
    while True:
        while top >= 0 and work[top].is_zero():
            top -= 1
        if top < zd:
            break
        qk = top - zd
        qc = div_exact(work[top], dt)
        qlayers[qk] = qlayers[qk] + qc
        for j in range(zd + 1):
            work[qk + j] = work[qk + j] - qc * d.layer(j)
    if any(not w.is_zero() for w in work):
        raise NotDivisible("nonzero remainder")
    return TriPoly(nq, tuple(qlayers))


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_TOKEN_OPS = set("+-*/^()")


def _tokenize(text: str):
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(("int", text[i:j]))
            i = j
            continue
        if ch.isalpha():
            tokens.append(("var", ch))
            i += 1
            continue
        if ch in _TOKEN_OPS:
            tokens.append((ch, ch))
            i += 1
            continue
        raise InputSyntaxError(f"unexpected character {ch!r} at position {i}")
    return tokens


class _Parser:
    """Recursive descent for: expr := [+-] term (('+'|'-') term)*;
    term := factor ('*' factor)*; factor := primary ('^' uint)*;
    primary := rational | var | '(' expr ')'."""

    def __init__(self, text: str, variables: tuple[str, ...]):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.vars = variables

    def peek(self):
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def take(self, kind=None):
        if self.pos >= len(self.tokens):
            raise InputSyntaxError("unexpected end of expression")
        tok = self.tokens[self.pos]
        if kind is not None and tok[0] != kind:
            raise InputSyntaxError(f"expected {kind!r}, found {tok[1]!r}")
        self.pos += 1
        return tok

    def parse(self):
        result = self.expr()
        if self.pos != len(self.tokens):
            raise InputSyntaxError(f"trailing input at token {self.tokens[self.pos][1]!r}")
        return result

    def expr(self):
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
        acc = _sp_scale(self.term(), sign)
        while self.peek() in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            acc = _sp_add(acc, _sp_scale(rhs, -1 if op == "-" else 1))
        return acc

    def term(self):
        acc = self.factor()
        while self.peek() == "*":
            self.take()
            acc = _sp_mul(acc, self.factor(), len(self.vars))
        return acc

    def factor(self):
        acc = self.primary()
        while self.peek() == "^":
            self.take()
            exp = int(self.take("int")[1])
            acc = _sp_pow(acc, exp, len(self.vars))
        return acc

    def primary(self):
        kind = self.peek()
        if kind == "int":
            num = int(self.take("int")[1])
            if self.peek() == "/":
                self.take()
                den = int(self.take("int")[1])
                if den == 0:
                    raise InputSyntaxError("zero denominator")
                return {(0,) * len(self.vars): Fraction(num, den)}
            return {(0,) * len(self.vars): Fraction(num)}
        if kind == "var":
            name = self.take("var")[1]
            if name not in self.vars:
                raise InputSyntaxError(f"unknown variable {name!r}")
            expo = tuple(1 if v == name else 0 for v in self.vars)
            return {expo: Fraction(1)}
        if kind == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return inner
        raise InputSyntaxError(f"unexpected token {self.tokens[self.pos][1]!r}")


def _sp_add(a, b):
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, Fraction(0)) + v
        if out[k] == 0:
            del out[k]
    return out


def _sp_scale(a, s):
    if s == 0:
        return {}
    return {k: v * s for k, v in a.items()}


def _sp_mul(a, b, nvars):
    out = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            k = tuple(ka[i] + kb[i] for i in range(nvars))
            out[k] = out.get(k, Fraction(0)) + va * vb
            if out[k] == 0:
                del out[k]
    return out


def _sp_pow(a, e, nvars):
    out = {(0,) * nvars: Fraction(1)}
    for _ in range(e):
        out = _sp_mul(out, a, nvars)
    return out


def parse_poly(text: str, variables=("x", "y")):
    """Parse an expression into a HomPoly (2 vars) or TriPoly (3 vars).

    Raises InputSyntaxError on grammar violations and NotHomogeneous when the
    monomials have mixed total degrees.
    """
    variables = tuple(variables)
    sparse = _Parser(text, variables).parse()
    if not sparse:
        if len(variables) == 2:
            return HomPoly.zero(0)
        return TriPoly.zero(0)
    degrees = {sum(k) for k in sparse}
    if len(degrees) != 1:
        raise NotHomogeneous(f"mixed total degrees {sorted(degrees)} in {text!r}")
    n = degrees.pop()
    if len(variables) == 2:
        coeffs = [Fraction(0)] * (n + 1)
        for (ex, ey), v in sparse.items():
            coeffs[ey] = v
        return HomPoly(n, tuple(coeffs))
    layers = []
    for k in range(n + 1):
        coeffs = [Fraction(0)] * (n - k + 1)
        for (ex, ey, ez), v in sparse.items():
            if ez == k:
                coeffs[ey] = v
        layers.append(HomPoly(n - k, tuple(coeffs)))
    return TriPoly(n, tuple(layers))


# ---------------------------------------------------------------------------
# canonical printing
# ---------------------------------------------------------------------------


def _format_monomial(coeff: Fraction, parts: list[tuple[str, int]]) -> tuple[int, str]:
    """Return (sign, body) for one monomial."""
    sign = -1 if coeff < 0 else 1
    coeff = abs(coeff)
    vars_txt = [f"{v}^{e}" if e > 1 else v for v, e in parts if e > 0]
    if not vars_txt:
        return sign, str(coeff)
    if coeff != 1:
        vars_txt.insert(0, str(coeff))
    return sign, "*".join(vars_txt)


def _join_terms(terms: list[tuple[int, str]]) -> str:
    if not terms:
        return "0"
    out = []
    for i, (sign, body) in enumerate(terms):
        if i == 0:
            out.append(("-" if sign < 0 else "") + body)
        else:
            out.append((" - " if sign < 0 else " + ") + body)
    return "".join(out)


def format_hompoly(p: HomPoly) -> str:
    """Canonical printer: terms in x-power descending order."""
    terms = []
    for h, c in enumerate(p.coeffs):
        if c == 0:
            continue
        terms.append(_format_monomial(c, [("x", p.degree - h), ("y", h)]))
    return _join_terms(terms)


def format_tripoly(p: TriPoly) -> str:
    monos = []
    for k, layer in enumerate(p.layers):
        for h, c in enumerate(layer.coeffs):
            if c != 0:
                monos.append((layer.degree - h, h, k, c))
    monos.sort(key=lambda m: (-m[0], -m[1]))
    terms = [
        _format_monomial(c, [("x", ex), ("y", ey), ("z", ez)]) for ex, ey, ez, c in monos
    ]
    return _join_terms(terms)
