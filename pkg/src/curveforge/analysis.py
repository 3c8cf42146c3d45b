"""Analysis of defining equations F z^2 + 2 G z + H = 0.

Computes the discriminant D = G^2 - F*H, the 2-formula (the multiset of
pairs (ord_t F, ord_t D) over the distinct roots t of F*D), checks the three
structural properties every valid 2-formula satisfies, applies the
sufficient irreducibility criterion, and derives the singularity data.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    InputSyntaxError,
    InvalidType,
    Lemma1Violation,
    ZeroDiscriminant,
)
from .multdata import Cusp, DataSpec, Pair, Single, Tacnode, format_data, genus_of
from .poly import (
    HomPoly,
    IrreducibleFactor,
    RootDesc,
    TriPoly,
    coprime_refine,
    div_exact,
    format_hompoly,
    gcd_poly,
    ord_at,
    parse_poly,
    squarefree_factor,
    substitute_linear,
)


@dataclass(frozen=True)
class CurveEquation:
    """A type (d, d-2) curve F z^2 + 2 G z + H = 0 with the big point at
    (0, 0, 1).  G is stored without the factor 2."""

    d: int
    F: HomPoly
    G: HomPoly
    H: HomPoly

    def __post_init__(self):
        if self.d < 4:
            raise InvalidType(f"degree {self.d} < 4")
        if self.F.degree != self.d - 2:
            raise InvalidType(f"deg F = {self.F.degree}, expected {self.d - 2}")
        if self.G.degree != self.d - 1:
            raise InvalidType(f"deg G = {self.G.degree}, expected {self.d - 1}")
        if self.H.degree != self.d:
            raise InvalidType(f"deg H = {self.H.degree}, expected {self.d}")
        if self.F.is_zero():
            raise InvalidType("F = 0: multiplicity at (0,0,1) exceeds d-2")

    def defining_polynomial(self) -> TriPoly:
        return TriPoly(
            self.d, (self.H, self.G.scale(2), self.F)
        )

    def change_xy(self, matrix) -> CurveEquation:
        """Apply an invertible substitution in (x, y) only (fixes Q)."""
        return CurveEquation(
            self.d,
            substitute_linear(self.F, matrix),
            substitute_linear(self.G, matrix),
            substitute_linear(self.H, matrix),
        )

    def shift_z(self, L: HomPoly) -> CurveEquation:
        """Apply z -> z + L(x, y) with deg L = 1 (fixes Q)."""
        if L.degree != 1:
            raise InvalidType("z-shift needs a linear form")
        return CurveEquation(
            self.d,
            self.F,
            self.G + self.F * L,
            self.H + (self.G * L).scale(2) + self.F * L * L,
        )


def curve_from_tripoly(p: TriPoly) -> CurveEquation:
    """Read a defining polynomial of z-degree exactly 2 into a CurveEquation."""
    if p.z_degree() != 2:
        raise InvalidType(f"z-degree {p.z_degree()} != 2")
    return CurveEquation(p.degree, p.layer(2), p.layer(1).scale(Fraction(1, 2)), p.layer(0))


def parse_curve_polynomial(text: str) -> CurveEquation:
    """Parse a full trivariate defining polynomial (z-degree must be 2)."""
    p = parse_poly(text, ("x", "y", "z"))
    if not isinstance(p, TriPoly):
        raise InvalidType("expected a trivariate polynomial")
    return curve_from_tripoly(p)


def discriminant(c: CurveEquation) -> HomPoly:
    delta = c.G * c.G - c.F * c.H
    if delta.is_zero():
        raise ZeroDiscriminant("G^2 - F*H = 0; the equation is degenerate")
    return delta


@dataclass(frozen=True)
class TwoFormula:
    """Entries (root, p, q) over the distinct roots of F times the
    discriminant.  A higher-degree root descriptor stands for deg-many
    conjugate roots, each contributing one identical (p, q) pair to the
    multiset."""

    entries: tuple[tuple[RootDesc, int, int], ...]

    def __post_init__(self):
        ordered = tuple(
            sorted(self.entries, key=lambda e: (-e[1], -e[2], e[0].sort_key()))
        )
        object.__setattr__(self, "entries", ordered)

    def expanded_pairs(self) -> list[tuple[int, int]]:
        out = []
        for root, p, q in self.entries:
            count = root.degree if isinstance(root, IrreducibleFactor) else 1
            out.extend([(p, q)] * count)
        return sorted(out, reverse=True)

    def sum_p(self) -> int:
        return sum(p for p, _ in self.expanded_pairs())

    def sum_q(self) -> int:
        return sum(q for _, q in self.expanded_pairs())

    def __str__(self):
        return "{" + ", ".join(f"({p},{q})" for p, q in self.expanded_pairs()) + "}"


def two_formula(c: CurveEquation) -> TwoFormula:
    """The pairs (ord_t F, ord_t D) over every distinct root t of F*D."""
    delta = discriminant(c)
    roots: dict[RootDesc, None] = {}
    residuals: list[HomPoly] = []
    for poly in (c.F, delta):
        for root, _mult in squarefree_factor(poly):
            if isinstance(root, IrreducibleFactor):
                residuals.append(root.poly)
            else:
                roots.setdefault(root)
    # residual factors of F and of the discriminant must be split against
    # each other so each descriptor has one well-defined (p, q)
    for factor in coprime_refine(residuals):
        roots.setdefault(IrreducibleFactor(factor))
    entries = []
    for root in roots:
        p = ord_at(c.F, root)
        q = ord_at(delta, root)
        if p > 0 or q > 0:
            entries.append((root, p, q))
    return TwoFormula(tuple(entries))


def check_lemma1(t: TwoFormula) -> tuple[bool, bool, bool]:
    """(i) sum q = 2 sum p + 2; (ii) p = q or min(p, q) even; (iii) some q odd."""
    pairs = t.expanded_pairs()
    cond1 = sum(q for _, q in pairs) == 2 * sum(p for p, _ in pairs) + 2
    cond2 = all(p == q or min(p, q) % 2 == 0 for p, q in pairs)
    cond3 = any(q % 2 == 1 for _, q in pairs)
    return cond1, cond2, cond3


def irreducible_sufficient(c: CurveEquation) -> bool:
    """True guarantees irreducibility (gcd(F,G,H) = 1 and some q odd);
    False is inconclusive."""
    g = gcd_poly(gcd_poly(c.F, c.G), c.H)
    if g.degree != 0:
        return False
    return check_lemma1(two_formula(c))[2]


def data_from_formula(t: TwoFormula, d: int) -> DataSpec:
    """Derive Data(C) from the 2-formula.

    Entries with p = 0, q <= 1 are smooth and dropped; the remaining entries
    classify as pair clusters (p > 0, q > 0 even), single clusters
    (p > 0, q odd or zero), tacnodes (p = 0, q even) and cusps
    (p = 0, q >= 3 odd).
    """
    ok = check_lemma1(t)
    if not all(ok):
        raise Lemma1Violation(f"2-formula fails properties {ok}: {t}")
    clusters: list[Pair | Single] = []
    off: list[Tacnode | Cusp] = []
    for p, q in t.expanded_pairs():
        if p == 0 and q <= 1:
            continue
        if p > 0 and q > 0 and q % 2 == 0:
            if p <= q:
                clusters.append(Pair(p // 2, p // 2, q // 2))
            else:
                clusters.append(Pair(q // 2, p - q // 2, q // 2))
        elif p > 0:
            clusters.append(Single(p, (q - 1) // 2 if q > 0 else 0))
        elif q % 2 == 0:
            off.append(Tacnode(q // 2))
        else:
            off.append(Cusp((q - 1) // 2))
    return DataSpec(tuple(clusters), tuple(off))


@dataclass(frozen=True)
class AnalysisReport:
    d: int
    two_formula: TwoFormula
    data: DataSpec
    genus: int
    lemma1_ok: tuple[bool, bool, bool]
    irreducible_sufficient: bool
    flex_tangent_count: int

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "two_formula": [
                {"root": str(root), "p": p, "q": q}
                for root, p, q in self.two_formula.entries
            ],
            "data": format_data(self.data),
            "genus": self.genus,
            "lemma1_ok": list(self.lemma1_ok),
            "irreducible_sufficient": self.irreducible_sufficient,
            "flex_tangent_count": self.flex_tangent_count,
        }


def analyze(c: CurveEquation) -> AnalysisReport:
    t = two_formula(c)
    ok = check_lemma1(t)
    if not all(ok):
        raise Lemma1Violation(f"2-formula fails properties {ok}: {t}")
    data = data_from_formula(t, c.d)
    genus = genus_of(c.d, data)
    # (1,0) entries mark flex-tangent lines at Q; (1,1) entries are plain
    # tangent lines -- Data(C) does not distinguish them, the report does.
    flex = sum(1 for p, q in t.expanded_pairs() if (p, q) == (1, 0))
    return AnalysisReport(
        d=c.d,
        two_formula=t,
        data=data,
        genus=genus,
        lemma1_ok=ok,
        irreducible_sufficient=irreducible_sufficient(c),
        flex_tangent_count=flex,
    )


# ---------------------------------------------------------------------------
# curve file format
# ---------------------------------------------------------------------------


def curve_to_json(c: CurveEquation, provenance: dict | None = None) -> dict:
    out = {
        "d": c.d,
        "F": format_hompoly(c.F),
        "G": format_hompoly(c.G),
        "H": format_hompoly(c.H),
    }
    if provenance:
        out["provenance"] = provenance
    return out


def curve_from_json(obj) -> CurveEquation:
    if isinstance(obj, str):
        obj = json.loads(obj)
    try:
        d = int(obj["d"])
        F = parse_poly(obj["F"])
        G = parse_poly(obj["G"])
        H = parse_poly(obj["H"])
    except KeyError as exc:
        raise InputSyntaxError(f"curve file missing field {exc}") from exc
    # a zero polynomial parses with degree 0; re-tag it to the expected degree
    if F.is_zero():
        F = HomPoly.zero(d - 2)
    if G.is_zero():
        G = HomPoly.zero(d - 1)
    if H.is_zero():
        H = HomPoly.zero(d)
    return CurveEquation(d, F, G, H)
