"""Systems of multiplicity sequences for type (d, d-2) curves.

At the big singular point Q every tangent cluster has at most two branches,
so the representable shapes are:

* ``Pair(k, kp, a)`` -- two branches with first multiplicities k <= kp whose
  infinitely near points coincide for ``a`` further steps, written
  ``(k/kp)(1/1)_a``;
* ``Single(k, a)`` -- one branch ``(k, 2_a)`` (``(k)`` when a = 0).

Away from Q only double points occur:

* ``Tacnode(b)`` -- ``(1/1)_b``, ADE type A_{2b-1};
* ``Cusp(b)`` -- ``(2_b)``, ADE type A_{2b}.

A :class:`DataSpec` collects the Q clusters and the off-Q singularities.
Germs with three or more branches have no representation here; they cannot
occur on a curve of this type.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .errors import InputSyntaxError, MultiplicityMismatch, NegativeGenus


@dataclass(frozen=True, order=True)
class Pair:
    k: int
    kp: int
    a: int

    def __post_init__(self):
        if not (1 <= self.k <= self.kp):
            raise ValueError("Pair requires 1 <= k <= kp")
        if self.a < 1:
            raise ValueError("Pair requires a >= 1")

    def mult(self) -> int:
        return self.k + self.kp

    def tail(self) -> int:
        return self.a

    def format(self) -> str:
        return f"({self.k}/{self.kp})(1/1)_{self.a}"


@dataclass(frozen=True, order=True)
class Single:
    k: int
    a: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("Single requires k >= 1")
        if self.a < 0:
            raise ValueError("Single requires a >= 0")

    def mult(self) -> int:
        return self.k

    def tail(self) -> int:
        return self.a

    def format(self) -> str:
        if self.a == 0:
            return f"({self.k})"
        return f"({self.k}, 2_{self.a})"


QCluster = Pair | Single


@dataclass(frozen=True, order=True)
class Tacnode:
    b: int

    def __post_init__(self):
        if self.b < 1:
            raise ValueError("Tacnode requires b >= 1")

    def format(self) -> str:
        return f"(1/1)_{self.b}"


@dataclass(frozen=True, order=True)
class Cusp:
    b: int

    def __post_init__(self):
        if self.b < 1:
            raise ValueError("Cusp requires b >= 1")

    def format(self) -> str:
        return f"(2_{self.b})"


OffQSing = Tacnode | Cusp


def _cluster_key(c: QCluster):
    if isinstance(c, Pair):
        return (1, c.k, c.kp, c.a)
    return (0, c.k, c.k, c.a)


def _offq_key(s: OffQSing):
    return (1 if isinstance(s, Tacnode) else 0, s.b)


@dataclass(frozen=True)
class DataSpec:
    """Data(C): the Q-point system plus the off-Q double points.

    Stored canonically: clusters and off-Q entries sorted descending.
    """

    q_clusters: tuple[QCluster, ...]
    off_q: tuple[OffQSing, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not self.q_clusters:
            raise ValueError("DataSpec requires at least one Q cluster")
        object.__setattr__(
            self, "q_clusters", tuple(sorted(self.q_clusters, key=_cluster_key, reverse=True))
        )
        object.__setattr__(
            self, "off_q", tuple(sorted(self.off_q, key=_offq_key, reverse=True))
        )

    # -- derived counts -----------------------------------------------------

    def mult_q(self) -> int:
        return sum(c.mult() for c in self.q_clusters)

    def n_clusters(self) -> int:
        return len(self.q_clusters)

    def s_pairs(self) -> int:
        return sum(1 for c in self.q_clusters if isinstance(c, Pair))

    def n_tacnodes(self) -> int:
        return sum(1 for s in self.off_q if isinstance(s, Tacnode))

    def n_cusps(self) -> int:
        return sum(1 for s in self.off_q if isinstance(s, Cusp))

    def s_prime(self) -> int:
        """Number of Single clusters with a positive tail (condition (2))."""
        return sum(1 for c in self.q_clusters if isinstance(c, Single) and c.a > 0)

    def sum_a(self) -> int:
        return sum(c.tail() for c in self.q_clusters)

    def sum_b(self) -> int:
        return sum(s.b for s in self.off_q)

    def degree(self) -> int:
        """The degree forced by mult_Q = d - 2."""
        return self.mult_q() + 2

    def sort_key(self):
        return (
            tuple(_cluster_key(c) for c in self.q_clusters),
            tuple(_offq_key(s) for s in self.off_q),
        )

    def format(self) -> str:
        return format_data(self)

    def __str__(self) -> str:
        return format_data(self)


# ---------------------------------------------------------------------------
# delta invariant / genus
# ---------------------------------------------------------------------------


def delta_invariant(item, d: int | None = None) -> int:
    """Delta invariant contribution.

    For a Tacnode/Cusp this is b; for a QCluster it is the tail contribution
    ``a`` (the common point Q itself is accounted once per DataSpec); for a
    DataSpec a degree d with mult_Q = d-2 is required and the total
    (d-2)(d-3)/2 + sum(a) + sum(b) is returned.
    """
    if isinstance(item, (Tacnode, Cusp)):
        return item.b
    if isinstance(item, (Pair, Single)):
        return item.tail()
    if isinstance(item, DataSpec):
        if d is None:
            raise MultiplicityMismatch("delta of a DataSpec needs a degree d")
        if item.mult_q() != d - 2:
            raise MultiplicityMismatch(
                f"mult_Q = {item.mult_q()} but d-2 = {d - 2}"
            )
        delta_q = (d - 2) * (d - 3) // 2 + item.sum_a()
        return delta_q + item.sum_b()
    raise TypeError(f"unsupported item {item!r}")


def genus_of(d: int, m: DataSpec) -> int:
    """Genus d - 2 - sum(a) - sum(b), cross-checked against delta bookkeeping."""
    if m.mult_q() != d - 2:
        raise MultiplicityMismatch(f"mult_Q = {m.mult_q()} but d-2 = {d - 2}")
    g = d - 2 - m.sum_a() - m.sum_b()
    g_delta = (d - 1) * (d - 2) // 2 - delta_invariant(m, d)
    assert g == g_delta, f"genus double-entry failed: {g} vs {g_delta}"
    if g < 0:
        raise NegativeGenus(f"genus {g} < 0 for d={d}, data {format_data(m)}")
    return g


def ade_label(item) -> str | None:
    """ADE label where one applies: A-series off Q, E6/E7/E8 shapes at Q."""
    if isinstance(item, Tacnode):
        return f"A_{2 * item.b - 1}"
    if isinstance(item, Cusp):
        return f"A_{2 * item.b}"
    if isinstance(item, Single):
        if (item.k, item.a) == (3, 0):
            return "E6"
        if (item.k, item.a) == (3, 1):
            return "E8"
        return None
    if isinstance(item, Pair):
        if (item.k, item.kp, item.a) == (1, 2, 1):
            return "E7"
        return None
    return None


# ---------------------------------------------------------------------------
# textual and JSON codecs
# ---------------------------------------------------------------------------


def format_data(m: DataSpec) -> str:
    q_part = " ".join(c.format() for c in m.q_clusters)
    if not m.off_q:
        return f"[{q_part}]"
    off_part = ", ".join(s.format() for s in m.off_q)
    return f"[{q_part}, {off_part}]"


_PAIR_RE = re.compile(r"^\((\d+)/(\d+)\)\(1/1\)_(\d+)$")
_SINGLE_RE = re.compile(r"^\((\d+)\)$")
_SINGLE_TAIL_RE = re.compile(r"^\((\d+),2_(\d+)\)$")
_TACNODE_RE = re.compile(r"^\(1/1\)_(\d+)$")
_CUSP_RE = re.compile(r"^\(2_(\d+)\)$")


def _split_top_level(text: str, sep: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise InputSyntaxError("unbalanced parentheses in data spec")
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth != 0:
        raise InputSyntaxError("unbalanced parentheses in data spec")
    parts.append("".join(cur))
    return parts


def _parse_qcluster(tok: str) -> QCluster:
    tok = tok.replace(" ", "")
    m = _PAIR_RE.match(tok)
    if m:
        return Pair(int(m.group(1)), int(m.group(2)), int(m.group(3)))
    m = _SINGLE_RE.match(tok)
    if m:
        return Single(int(m.group(1)), 0)
    m = _SINGLE_TAIL_RE.match(tok)
    if m:
        return Single(int(m.group(1)), int(m.group(2)))
    raise InputSyntaxError(f"cannot parse Q cluster {tok!r}")


def _parse_offq(tok: str) -> OffQSing:
    tok = tok.replace(" ", "")
    m = _TACNODE_RE.match(tok)
    if m:
        return Tacnode(int(m.group(1)))
    m = _CUSP_RE.match(tok)
    if m:
        return Cusp(int(m.group(1)))
    raise InputSyntaxError(f"cannot parse off-Q singularity {tok!r}")


def parse_data(text: str) -> DataSpec:
    """Inverse of :func:`format_data` (tolerant about whitespace)."""
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise InputSyntaxError("data spec must be bracketed: [ ... ]")
    chunks = _split_top_level(text[1:-1].strip(), ",")
    if not chunks or not chunks[0].strip():
        raise InputSyntaxError("empty data spec")
    q_tokens = [t for t in _split_top_level(chunks[0].strip(), " ") if t.strip()]
    # adjacent clusters may be written without spaces: split on ")(" boundaries
    expanded: list[str] = []
    for tok in q_tokens:
        expanded.extend(_split_adjacent(tok))
    clusters = tuple(_parse_qcluster(t) for t in expanded)
    off = tuple(_parse_offq(t.strip()) for t in chunks[1:] if t.strip())
    if len([t for t in chunks[1:] if not t.strip()]):
        raise InputSyntaxError("empty off-Q entry")
    try:
        return DataSpec(clusters, off)
    except ValueError as exc:
        raise InputSyntaxError(str(exc)) from exc


def _split_adjacent(tok: str) -> list[str]:
    """Split e.g. "(1)(1)" into ["(1)", "(1)"], keeping pair tails attached."""
    tok = tok.strip()
    out = []
    while tok:
        m = _leading_cluster(tok)
        out.append(tok[:m])
        tok = tok[m:]
    return out


def _leading_cluster(tok: str) -> int:
    depth = 0
    for i, ch in enumerate(tok):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth == 0:
                j = i + 1
                # a pair or tacnode tail continues with (1/1)_a or _b
                if tok[j : j + 5] == "(1/1)":
                    j += 5
                if j < len(tok) and tok[j] == "_":
                    j += 1
                    while j < len(tok) and tok[j].isdigit():
                        j += 1
                return j
    raise InputSyntaxError(f"unbalanced cluster token {tok!r}")


def data_to_json(m: DataSpec) -> dict:
    def cl(c):
        if isinstance(c, Pair):
            return {"kind": "pair", "k": c.k, "kp": c.kp, "a": c.a}
        return {"kind": "single", "k": c.k, "a": c.a}

    def off(s):
        if isinstance(s, Tacnode):
            return {"kind": "tacnode", "b": s.b}
        return {"kind": "cusp", "b": s.b}

    return {"q_clusters": [cl(c) for c in m.q_clusters], "off_q": [off(s) for s in m.off_q]}


def data_from_json(obj) -> DataSpec:
    if isinstance(obj, str):
        obj = json.loads(obj)
    clusters = []
    for c in obj["q_clusters"]:
        if c["kind"] == "pair":
            clusters.append(Pair(c["k"], c["kp"], c["a"]))
        elif c["kind"] == "single":
            clusters.append(Single(c["k"], c["a"]))
        else:
            raise InputSyntaxError(f"unknown cluster kind {c['kind']!r}")
    off = []
    for s in obj.get("off_q", []):
        if s["kind"] == "tacnode":
            off.append(Tacnode(s["b"]))
        elif s["kind"] == "cusp":
            off.append(Cusp(s["b"]))
        else:
            raise InputSyntaxError(f"unknown off-Q kind {s['kind']!r}")
    return DataSpec(tuple(clusters), tuple(off))
