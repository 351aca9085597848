"""Realizations, the exact verifier, levels and the fragment table."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import networkx as nx

from ..algebra import (
    DC, EC, EQ, NTPP, NTPPI, PO, TPP, TPPI, Rcc5, format_mask, members, weaken_mask,
)
from ..geometry import (
    Polytope, GeometryError, common_interior_point, convex_hull, rcc8_relation,
)
from ..network import Network, NetworkError

OVERLAP = PO | TPP | NTPP | TPPI | NTPPI | EQ


class RealizationError(RuntimeError):
    """A construction could not produce a verified realization."""


@dataclass
class Realization:
    dim: int
    regions: dict[str, Polytope]
    weak: bool = False
    oclique_common_part: bool = False

    def __post_init__(self):
        for name, p in self.regions.items():
            if p.dim != self.dim:
                raise GeometryError(f"region {name} has dimension {p.dim}, expected {self.dim}")

    def restrict(self, names) -> "Realization":
        return Realization(self.dim, {v: self.regions[v] for v in names}, self.weak, self.oclique_common_part)

    def mapped(self, fn) -> "Realization":
        regions = {v: fn(p) for v, p in self.regions.items()}
        dim = next(iter(regions.values())).dim if regions else self.dim
        return Realization(dim, regions, self.weak, self.oclique_common_part)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "weak": self.weak,
            "regions": {v: self.regions[v].to_json() for v in sorted(self.regions)},
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "Realization":
        dim = int(obj["dim"])
        regions = {}
        for name, poly in obj["regions"].items():
            if int(poly["dim"]) != dim:
                raise GeometryError(f"region {name} has the wrong dimension")
            regions[name] = Polytope.from_json(poly)
        return cls(dim, regions, bool(obj.get("weak", False)))


@dataclass(frozen=True)
class Violation:
    a: str
    b: str
    expected: int
    actual: int | None     # None for a failed common-part check

    def to_json(self) -> dict:
        return {
            "pair": [self.a, self.b],
            "expected": format_mask(self.expected),
            "actual": format_mask(self.actual) if self.actual is not None else None,
        }

    def __str__(self) -> str:
        if self.actual is None:
            return f"O-clique {self.a} has no common interior point"
        return f"{self.a} {format_mask(self.actual)} {self.b}, expected {format_mask(self.expected)}"


@dataclass
class VerificationReport:
    relations: dict[tuple[str, str], tuple[int, int]] = field(default_factory=dict)
    violations: list[Violation] = field(default_factory=list)
    weak: bool = False

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "weak": self.weak,
            "pairs": [
                {"pair": [a, b], "expected": format_mask(e), "actual": format_mask(x)}
                for (a, b), (e, x) in sorted(self.relations.items())
            ],
            "violations": [v.to_json() for v in self.violations],
        }


def maximal_oclique_ok(regions: Mapping[str, Polytope], names=None) -> tuple[bool, list[tuple[str, ...]]]:
    """Do all maximal cliques of pairwise interior-overlapping regions share an
    interior point?  Returns (ok, failing cliques)."""
    names = sorted(regions) if names is None else list(names)
    g = nx.Graph()
    g.add_nodes_from(names)
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            if rcc8_relation(regions[a], regions[b]).bit & OVERLAP:
                g.add_edge(a, b)
    bad = []
    for clique in nx.find_cliques(g):
        if len(clique) < 3:
            continue
        if common_interior_point([regions[v] for v in clique]) is None:
            bad.append(tuple(sorted(clique)))
    return not bad, sorted(bad)


def verify(n: Network, r: Realization, weak: bool | None = None,
           check_common_part: bool | None = None) -> VerificationReport:
    """Exact check of every pair against the network.

    ``weak`` defaults to the realization's flag; with weak checking TPP also
    accepts NTPP and EC also accepts DC.
    """
    weak = r.weak if weak is None else weak
    missing = [v for v in n.vars if v not in r.regions]
    if missing:
        raise NetworkError(f"realization lacks regions for {', '.join(missing)}")
    rep = VerificationReport(weak=weak)
    vs = n.vars
    for i, j in n.pairs():
        a, b = vs[i], vs[j]
        expected = n.mask(i, j)
        allowed = weaken_mask(expected) if weak else expected
        actual = rcc8_relation(r.regions[a], r.regions[b]).bit
        rep.relations[(a, b)] = (expected, actual)
        if not actual & allowed:
            rep.violations.append(Violation(a, b, expected, actual))
    if check_common_part is None:
        check_common_part = r.oclique_common_part
    if check_common_part and rep.ok:
        ok, bad = maximal_oclique_ok(r.regions, vs)
        for clique in bad:
            rep.violations.append(Violation(",".join(clique), "", OVERLAP, None))
    return rep


def is_valid(n: Network, r: Realization, weak: bool | None = None) -> bool:
    """Cheap yes/no version of verify: stops at the first violation."""
    weak = r.weak if weak is None else weak
    vs = n.vars
    for i, j in n.pairs():
        allowed = n.mask(i, j)
        if weak:
            allowed = weaken_mask(allowed)
        if not rcc8_relation(r.regions[vs[i]], r.regions[vs[j]]).bit & allowed:
            return False
    return True


# -- levels ----------------------------------------------------------------------

def level(n: Network, v: str) -> int:
    """1 + length of the longest NTPP chain ending at v."""
    return levels(n)[v]


def levels(n: Network) -> dict[str, int]:
    vs = n.vars
    memo: dict[int, int] = {}

    def go(j: int, stack: frozenset) -> int:
        if j in memo:
            return memo[j]
        if j in stack:
            raise NetworkError("NTPP cycle; network is inconsistent")
        best = 0
        for i in range(len(vs)):
            if i != j and n.mask(i, j) == NTPP:
                best = max(best, go(i, stack | {j}))
        memo[j] = best + 1
        return best + 1

    return {vs[j]: go(j, frozenset()) for j in range(len(vs))}


# -- fragment table -----------------------------------------------------------------

@dataclass(frozen=True)
class FragmentBound:
    fragment: int           # mask of base relations used (EQ excluded)
    bound: int | None       # None means unbounded
    strategy: str

    def to_json(self) -> dict:
        return {
            "fragment": [b.label for b in members(self.fragment)],
            "bound": self.bound if self.bound is not None else "unbounded",
            "strategy": self.strategy,
        }


# (fragment, bound, strategy); listed with smaller bounds first
MAXIMAL_FRAGMENTS: tuple[tuple[int, int, str], ...] = (
    (PO, 1, "interval_po"),
    (TPP | TPPI, 1, "interval_tpp"),
    (DC | NTPP | NTPPI, 1, "interval_forest"),
    (DC | TPP | TPPI | NTPP | NTPPI, 2, "planar_dc_pp"),
    (PO | TPP | TPPI | NTPP | NTPPI, 2, "planar_po_pp"),
    (EC | TPP | TPPI | NTPP | NTPPI, 2, "planar_ec_pp"),
    (EC | DC | PO, 3, "neighborly_ec_dc_po"),
    (EC | DC | NTPP | NTPPI, 3, "neighborly_nested"),
    (EC | DC | TPP | TPPI | NTPP | NTPPI, 4, "tree_4d"),
)

RCC5_FRAGMENTS: tuple[tuple[frozenset, int], ...] = (
    (frozenset({Rcc5.PO}), 1),
    (frozenset({Rcc5.PP, Rcc5.PPI}), 1),
    (frozenset({Rcc5.DR}), 1),
    (frozenset({Rcc5.DR, Rcc5.PP, Rcc5.PPI}), 1),
    (frozenset({Rcc5.PO, Rcc5.PP, Rcc5.PPI}), 2),
    (frozenset({Rcc5.DR, Rcc5.PO}), 3),
)


def fragment_bound(used: int) -> FragmentBound:
    """Bound for an arbitrary set of base relations (as a mask)."""
    used &= ~EQ
    # converses always travel together in a network
    for a, b in ((TPP, TPPI), (NTPP, NTPPI)):
        if used & (a | b):
            used |= a | b
    for frag, bound, strategy in MAXIMAL_FRAGMENTS:
        if used & ~frag == 0:
            return FragmentBound(used, bound, strategy)
    return FragmentBound(used, None, "unbounded")


def classify_fragment(n: Network) -> FragmentBound:
    if not n.is_atomic:
        raise NetworkError("fragment classification needs an atomic network")
    return fragment_bound(n.used_relations())


def rcc5_bound(blocks) -> int | None:
    blocks = frozenset(Rcc5[b.upper()] if isinstance(b, str) else b for b in blocks) - {Rcc5.EQ}
    if Rcc5.PP in blocks or Rcc5.PPI in blocks:
        blocks |= {Rcc5.PP, Rcc5.PPI}
    best = None
    for frag, bound in RCC5_FRAGMENTS:
        if blocks <= frag and (best is None or bound < best):
            best = bound
    return best


# -- small helpers shared by the constructions ---------------------------------------

def rel_lists(n: Network):
    """Per variable: {base mask -> list of other variables v with (var, v) == mask}."""
    out = {v: {} for v in n.vars}
    for i, a in enumerate(n.vars):
        for j, b in enumerate(n.vars):
            if i != j:
                out[a].setdefault(n.mask(i, j), []).append(b)
    return out


def below(n: Network, v: str, mask: int) -> list[str]:
    """Variables u with (u, v) in mask."""
    j = n.index(v)
    return [u for i, u in enumerate(n.vars) if i != j and n.mask(i, j) & mask]


def anchor_hull(anchors) -> Polytope:
    """Hull of points, each fattened by an axis cube of the given radius (0 = bare point)."""
    from ..geometry import disc_polytope
    pts = []
    for p, radius in anchors:
        if radius:
            pts.extend(disc_polytope(p, radius).vertices)
        else:
            pts.append(tuple(p))
    return convex_hull(pts)
