"""One-dimensional constructions: overlapping, tangentially nested and forest layouts."""
from __future__ import annotations

from fractions import Fraction

from ..algebra import DC, NTPP, NTPPI, PO, TPP, TPPI
from ..geometry import interval
from ..network import Network, NetworkError
from .realization import Realization


def _require(n: Network, allowed: int, what: str):
    if not n.is_atomic:
        raise NetworkError(f"{what} needs an atomic network")
    if n.used_relations() & ~(allowed | (1 << 7)):
        raise NetworkError(f"network uses relations outside the {what} fragment")


def realize_1d_po(n: Network) -> Realization:
    """Pairwise PO: the i-th variable gets [i, m + i]."""
    _require(n, PO, "PO")
    m = len(n)
    return Realization(1, {v: interval(i, m + i) for i, v in enumerate(n.vars, 1)})


def realize_1d_tpp(n: Network) -> Realization:
    """Chains of TPP: intervals [0, u] sharing the left endpoint."""
    _require(n, TPP | TPPI, "TPP")
    regions = {}
    for j, v in enumerate(n.vars):
        rank = sum(1 for i in range(len(n)) if i != j and n.mask(i, j) == TPP)
        regions[v] = interval(0, rank + 1)
    return Realization(1, regions)


def containment_forest(n: Network, mask: int = NTPP) -> dict[str, str | None]:
    """Parent of each variable: its smallest container under ``mask``."""
    parent = {}
    vs = n.vars
    for j, v in enumerate(vs):
        ups = [i for i in range(len(vs)) if i != j and n.mask(j, i) & mask]
        # the smallest container lies inside all others
        best = None
        for i in ups:
            if all(k == i or n.mask(i, k) & mask for k in ups):
                best = vs[i]
                break
        if ups and best is None:
            raise NetworkError(f"containers of {v} are not nested")
        parent[v] = best
    return parent


def forest_intervals(n: Network, mask: int = NTPP) -> dict[str, tuple[Fraction, Fraction]]:
    """Disjoint siblings strictly inside their parents.

    Roots sit at [2j, 2j+1]; a node of depth i with parent [l, u] gets the
    slot [l + 2j s, l + (2j+1) s] with s = (u - l) / (2|A| + 2), where j
    numbers the |A| nodes of depth i.
    """
    parent = containment_forest(n, mask)
    depth = {}

    def d(v):
        if v not in depth:
            depth[v] = 0 if parent[v] is None else d(parent[v]) + 1
        return depth[v]

    by_depth: dict[int, list[str]] = {}
    for v in n.vars:
        by_depth.setdefault(d(v), []).append(v)
    out = {}
    for i in sorted(by_depth):
        layer = by_depth[i]
        for j, v in enumerate(layer, 1):
            if i == 0:
                out[v] = (Fraction(2 * j), Fraction(2 * j + 1))
            else:
                lo, hi = out[parent[v]]
                step = (hi - lo) / (2 * len(layer) + 2)
                out[v] = (lo + 2 * j * step, lo + (2 * j + 1) * step)
    return out


def realize_1d_dc_ntpp(n: Network) -> Realization:
    _require(n, DC | NTPP | NTPPI, "DC/NTPP")
    return Realization(1, {v: interval(lo, hi) for v, (lo, hi) in forest_intervals(n).items()})
