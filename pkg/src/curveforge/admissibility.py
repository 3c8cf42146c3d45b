"""Admissibility of singularity data for a (d, g) pair.

``validate`` checks the four structural conditions a Data(C) must satisfy,
``corollary_class`` pattern-matches the all-cuspidal and bibranched-only
shape tables, and ``enumerate_data`` lists every admissible DataSpec.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EmptyRange, NotAdmissible
from .multdata import Cusp, DataSpec, Pair, Single, Tacnode, _cluster_key, format_data

CUSPIDAL_CLASSES = ("a", "b", "c")
BIBRANCHED_CLASSES = ("e", "f", "aa", "ab", "ac", "bb", "bc", "cc", "aa1", "aa2", "aa3", "aa4")


@dataclass(frozen=True)
class Violation:
    condition: str  # C1a, C1b, C2, C3, C4 or MultQ
    detail: str

    def __str__(self):
        return f"{self.condition}: {self.detail}"


def validate(d: int, g: int, m: DataSpec) -> list[Violation]:
    """Empty list iff (d, g, m) satisfies all admissibility conditions."""
    out: list[Violation] = []
    if d < 4 or g < 0:
        out.append(Violation("MultQ", f"out of range: d={d}, g={g}"))
        return out
    if m.mult_q() != d - 2:
        out.append(
            Violation("C1a", f"sum of cluster multiplicities {m.mult_q()} != d-2 = {d - 2}")
        )
    if m.sum_a() + m.sum_b() != d - g - 2:
        out.append(
            Violation(
                "C1b",
                f"sum a + sum b = {m.sum_a() + m.sum_b()} != d-g-2 = {d - g - 2}",
            )
        )
    if m.n_cusps() + m.s_prime() > 2 * g + 2:
        out.append(
            Violation(
                "C2",
                f"n' + s' = {m.n_cusps()} + {m.s_prime()} > 2g+2 = {2 * g + 2}",
            )
        )
    for i, c in enumerate(m.q_clusters):
        if isinstance(c, Pair):
            if c.kp == c.k and c.a < c.k:
                out.append(Violation("C3", f"cluster {i}: k'=k={c.k} needs a >= k, got {c.a}"))
            if c.kp > c.k and c.a != c.k:
                out.append(Violation("C3", f"cluster {i}: k'>k needs a = k={c.k}, got {c.a}"))
        elif c.a > 0:
            if c.k % 2 == 0 and c.a < c.k // 2:
                out.append(
                    Violation("C4", f"cluster {i}: even k={c.k} needs a >= {c.k // 2}, got {c.a}")
                )
            if c.k % 2 == 1 and c.a != (c.k - 1) // 2:
                out.append(
                    Violation(
                        "C4", f"cluster {i}: odd k={c.k} needs a = {(c.k - 1) // 2}, got {c.a}"
                    )
                )
    return out


def _is_b_type(c) -> bool:
    return isinstance(c, Single) and c.k % 2 == 1 and c.k >= 3 and c.a == (c.k - 1) // 2


def _is_c_type(c) -> bool:
    return isinstance(c, Single) and c.k % 2 == 0 and c.a >= c.k // 2 and c.a > 0


def corollary_class(m: DataSpec) -> str:
    """Classify an admissible spec into its table class, or "mixed"."""
    d = m.degree()
    g = d - 2 - m.sum_a() - m.sum_b()
    if validate(d, g, m):
        raise NotAdmissible(f"not admissible for derived (d={d}, g={g}): {format_data(m)}")
    label = _classify(m, d, g)
    _cross_check_table(m, d, g, label)
    return label


def _classify(m: DataSpec, d: int, g: int) -> str:
    clusters = m.q_clusters
    all_cusps = all(isinstance(s, Cusp) for s in m.off_q)
    all_tacs = all(isinstance(s, Tacnode) for s in m.off_q)
    if len(clusters) == 1 and isinstance(clusters[0], Single) and all_cusps:
        c = clusters[0]
        if c.a == 0:
            return "a"
        if _is_b_type(c):
            return "b"
        if _is_c_type(c):
            return "c"
        return "mixed"
    if all_tacs:
        if len(clusters) == 1 and isinstance(clusters[0], Pair):
            c = clusters[0]
            if c.kp == c.k:
                return "e"
            return "f"
        if len(clusters) == 2 and all(isinstance(c, Single) for c in clusters):
            c1, c2 = clusters
            if d == 4 and c1.k == c2.k == 1 and c1.a == c2.a == 0:
                bs = sorted((s.b for s in m.off_q), reverse=True)
                return {(2,): "aa1", (1, 1): "aa2", (1,): "aa3", (): "aa4"}[tuple(bs)]
            plain1, plain2 = c1.a == 0, c2.a == 0
            if plain1 and plain2:
                return "aa"
            if plain1 or plain2:
                tailed = c2 if plain1 else c1
                if _is_b_type(tailed):
                    return "ab"
                if _is_c_type(tailed):
                    return "ac"
                return "mixed"
            kinds = sorted("b" if _is_b_type(c) else "c" if _is_c_type(c) else "?" for c in clusters)
            return {("b", "b"): "bb", ("b", "c"): "bc", ("c", "c"): "cc"}.get(
                tuple(kinds), "mixed"
            )
    return "mixed"


def _cross_check_table(m: DataSpec, d: int, g: int, label: str) -> None:
    """The table rows carry explicit parameter relations and cusp-count
    bounds; re-derive them and flag any discrepancy with the conditions."""
    sum_b = m.sum_b()
    n_cusps = m.n_cusps()
    if label == "a":
        k = m.q_clusters[0].k
        assert k == g + sum_b, f"class (a) relation failed on {format_data(m)}"
        assert n_cusps <= 2 * g + 2, f"class (a) cusp bound failed on {format_data(m)}"
    elif label == "b":
        k = (m.q_clusters[0].k - 1) // 2
        assert k + 1 == g + sum_b, f"class (b) relation failed on {format_data(m)}"
        assert n_cusps <= 2 * g + 1, f"class (b) cusp bound failed on {format_data(m)}"
    elif label == "c":
        k = m.q_clusters[0].k // 2
        assert k == g + (m.q_clusters[0].a - k) + sum_b, (
            f"class (c) relation failed on {format_data(m)}"
        )
        assert n_cusps <= 2 * g + 1, f"class (c) cusp bound failed on {format_data(m)}"
    elif label == "e":
        c = m.q_clusters[0]
        assert c.k == g + (c.a - c.k) + sum_b, f"class (e) relation failed on {format_data(m)}"
    elif label == "f":
        c = m.q_clusters[0]
        assert c.kp == g + sum_b, f"class (f) relation failed on {format_data(m)}"
    elif label in ("aa", "ab", "ac", "bb", "bc", "cc"):
        # each bibranched row reduces to: sum of branch k-parameters plus the
        # row's j/l offsets equals g + sum b; all encode mult_Q - sum_a
        assert d - 2 - m.sum_a() == g + sum_b, f"class ({label}) relation failed on {format_data(m)}"
    # aa1..aa4 are pinned shapes; validate() already forces their (d, g)


def enumerate_data(d: int, g: int, data_filter: str = "all") -> list[DataSpec]:
    """All admissible DataSpecs for (d, g), canonically ordered.

    ``data_filter`` restricts to the all-cuspidal or bibranched-only table
    shapes.  Returns [] when the budgets are unsatisfiable (e.g. g > d-2).
    """
    if d < 4 or g < 0:
        raise EmptyRange(f"need d >= 4 and g >= 0, got d={d}, g={g}")
    if data_filter not in ("all", "cuspidal", "bibranched"):
        raise EmptyRange(f"unknown filter {data_filter!r}")
    mult_budget = d - 2
    tail_budget = d - g - 2
    if tail_budget < 0:
        return []
    specs: list[DataSpec] = []
    for clusters, sum_a in _cluster_multisets(mult_budget, tail_budget):
        for off in _offq_multisets(tail_budget - sum_a):
            m = DataSpec(tuple(clusters), tuple(off))
            if m.n_cusps() + m.s_prime() > 2 * g + 2:
                continue
            assert not validate(d, g, m), f"enumerator produced invalid spec {m}"
            specs.append(m)
    if data_filter == "cuspidal":
        specs = [m for m in specs if corollary_class(m) in CUSPIDAL_CLASSES]
    elif data_filter == "bibranched":
        specs = [m for m in specs if corollary_class(m) in BIBRANCHED_CLASSES]
    specs.sort(key=lambda m: m.sort_key(), reverse=True)
    return specs


def _cluster_options(mult: int, tails: int):
    """All clusters with cluster multiplicity <= mult and tail <= tails."""
    out = []
    for k in range(1, mult + 1):
        out.append(Single(k, 0))
        if k % 2 == 0:
            out.extend(Single(k, a) for a in range(k // 2, tails + 1))
        elif k >= 3 and (k - 1) // 2 <= tails:
            out.append(Single(k, (k - 1) // 2))
    for k in range(1, mult // 2 + 1):
        for kp in range(k, mult - k + 1):
            if kp == k:
                out.extend(Pair(k, kp, a) for a in range(k, tails + 1))
            elif k <= tails:
                out.append(Pair(k, kp, k))
    return out


def _cluster_multisets(mult_budget: int, tail_budget: int):
    """Yield (clusters, sum_a) with total multiplicity exactly mult_budget,
    clusters in nonincreasing canonical order."""
    options = sorted(_cluster_options(mult_budget, tail_budget), key=_cluster_key, reverse=True)

    def rec(start: int, mult_left: int, tail_left: int, acc: list):
        if mult_left == 0:
            yield list(acc), tail_budget - tail_left
            return
        for i in range(start, len(options)):
            c = options[i]
            if c.mult() > mult_left or c.tail() > tail_left:
                continue
            acc.append(c)
            yield from rec(i, mult_left - c.mult(), tail_left - c.tail(), acc)
            acc.pop()

    yield from rec(0, mult_budget, tail_budget, [])


def _offq_multisets(budget: int):
    """Yield multisets of off-Q singularities with total b exactly budget."""
    options = [Tacnode(b) for b in range(budget, 0, -1)] + [
        Cusp(b) for b in range(budget, 0, -1)
    ]
    options.sort(key=lambda s: (1 if isinstance(s, Tacnode) else 0, s.b), reverse=True)

    def rec(start: int, left: int, acc: list):
        if left == 0:
            yield list(acc)
            return
        for i in range(start, len(options)):
            s = options[i]
            if s.b > left:
                continue
            acc.append(s)
            yield from rec(i, left - s.b, acc)
            acc.pop()

    yield from rec(0, budget, [])
