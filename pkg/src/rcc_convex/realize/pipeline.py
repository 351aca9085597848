"""The general realizer: fragment constructions first, then the pair-peeling
pipeline built from chain lifts, cone lifts and a small-network search."""
from __future__ import annotations

import itertools
import math
import os
import random

import networkx as nx

from ..algebra import DC, EC, EQ, NTPP, NTPPI, PO, TPP, TPPI
from ..consistency import NESTED_ORDER, VALUE_ORDER, atomic_refinement, path_consistency
from ..geometry import DegenerateError, GeometryError, interval
from ..network import Network, NetworkError, merge_eq_map
from .anchors import realize_anchor_hulls
from .intervals import realize_1d_dc_ntpp, realize_1d_po, realize_1d_tpp
from .lifting import embed, lift_condition, lift_ntpp_dc, lift_weak_ec
from .planar import realize_2d_dc_pp, realize_2d_ec_pp, realize_2d_po_pp
from .realization import (
    Realization, RealizationError, classify_fragment, fragment_bound, maximal_oclique_ok, verify,
)
from .search import realize_boxes
from .spatial import realize_3d_ec_dc_ntpp, realize_3d_ec_dc_po
from .tree4d import realize_4d_tree

DEFAULT_RETRIES = 12
RETRIES_ENV = "RCC_CONVEX_RETRIES"
SEARCH_NODES = 20000


class InconsistentNetworkError(RealizationError):
    """The network has no solution at all."""


class DimensionNotAchieved(RealizationError):
    """No strategy produced a realization in the requested dimension."""

    def __init__(self, message: str, target: int, achieved: Realization | None = None):
        super().__init__(message)
        self.target = target
        self.achieved = achieved


def retry_budget(retries: int | None = None) -> int:
    if retries is not None:
        return retries
    raw = os.environ.get(RETRIES_ENV)
    if raw is None:
        return DEFAULT_RETRIES
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{RETRIES_ENV} must be an integer, got {raw!r}") from None
    if value < 0:
        raise ValueError(f"{RETRIES_ENV} must be non-negative")
    return value


STRATEGIES = {
    "interval_po": lambda n, k: realize_1d_po(n),
    "interval_tpp": lambda n, k: realize_1d_tpp(n),
    "interval_forest": lambda n, k: realize_1d_dc_ntpp(n),
    "planar_dc_pp": realize_2d_dc_pp,
    "planar_po_pp": realize_2d_po_pp,
    "planar_ec_pp": realize_2d_ec_pp,
    "neighborly_ec_dc_po": realize_3d_ec_dc_po,
    "neighborly_nested": realize_3d_ec_dc_ntpp,
    "tree_4d": realize_4d_tree,
}

_PLANAR = {"dc_pp": realize_2d_dc_pp, "po_pp": realize_2d_po_pp, "ec_pp": realize_2d_ec_pp}


def realize_2d(n: Network, fragment: str | None = None, retries: int | None = None) -> Realization:
    """One of the three planar constructions, chosen by name or by the relations used."""
    if fragment is None:
        fb = classify_fragment(n)
        if fb.strategy not in STRATEGIES or not fb.strategy.startswith("planar"):
            if fb.bound is not None and fb.bound < 2:
                return embed(n, STRATEGIES[fb.strategy](n, retry_budget(retries)), 2)
            raise NetworkError(f"relations used fit no planar construction ({fb.strategy})")
        fragment = fb.strategy.removeprefix("planar_")
    try:
        build = _PLANAR[fragment]
    except KeyError:
        raise NetworkError(f"unknown planar fragment {fragment!r}") from None
    return build(n, retry_budget(retries))


def realize_fragment(n: Network, dim: int, retries: int | None = None) -> Realization | None:
    """The construction for n's fragment, embedded into R^dim, if its bound allows."""
    fb = classify_fragment(n)
    if fb.bound is None or fb.bound > dim:
        return None
    r = STRATEGIES[fb.strategy](n, retry_budget(retries))
    return embed(n, r, dim)


# -- small networks ------------------------------------------------------------

def _intervals(n: Network, weak: bool) -> Realization | None:
    from ..oracle import realizable_1d
    got = realizable_1d(n, weak=weak)
    if got is None:
        return None
    return Realization(1, {v: interval(*got[v]) for v in n.vars}, weak=weak, oclique_common_part=True)


def weak_search(n: Network, dim: int, seed: int = 0) -> Realization | None:
    """A weak realization in R^dim, or None within the search budget."""
    if dim == 1:
        return _intervals(n, True)
    r = realize_boxes(n, dim, seed=seed, node_budget=SEARCH_NODES, weak=True)
    if r is not None:
        r.oclique_common_part = True
    return r


def realize_small_search(n: Network, dim: int, seed: int = 0) -> Realization | None:
    """Search for small networks: interval models, box models, and (for networks
    over EC, PO, TPP, TPPi) cones over weak solutions one dimension down.

    Boxes, intervals and cones always leave every clique of overlapping regions
    with a common interior point, so results can feed the chain lift."""
    if not n.is_atomic:
        raise NetworkError("small-network search needs an atomic network")
    if len(n) == 0:
        return Realization(dim, {})
    if dim == 1:
        return _intervals(n, False)
    r = realize_boxes(n, dim, seed=seed, node_budget=SEARCH_NODES)
    if r is not None:
        r.oclique_common_part = True
        return r
    if n.used_relations() & ~(EC | PO | TPP | TPPI | EQ):
        return None
    return cone_search(n, dim, seed)


def cone_search(n: Network, dim: int, seed: int = 0) -> Realization | None:
    """Weak solution in R^(dim-1), with or without one region held back,
    coned into an exact solution in R^dim."""
    vs = list(n.vars)
    base = weak_search(n, dim - 1, seed)
    if base is not None:
        try:
            return lift_weak_ec(n, base)
        except (RealizationError, DegenerateError):
            pass
    for u in vs:
        rest = [v for v in vs if v != u]
        if lift_condition(n, rest, u) is None:
            continue
        base = weak_search(n.restrict(rest), dim - 1, seed)
        if base is None:
            continue
        try:
            return lift_weak_ec(n, base, u)
        except (RealizationError, DegenerateError):
            continue
    return None


# -- pair peeling --------------------------------------------------------------

def _pair_orders(n: Network, seed: int):
    """Candidate lists of disjoint DC/NTPP pairs, best first."""
    vs = n.vars
    dc = [(vs[i], vs[j]) for i, j in n.pairs() if n.mask(i, j) == DC]
    nt = []
    for i, j in n.pairs():
        if n.mask(i, j) == NTPP:
            nt.append((vs[i], vs[j]))
        elif n.mask(i, j) == NTPPI:
            nt.append((vs[j], vs[i]))
    g = nx.Graph()
    g.add_edges_from(dc + nt)
    seen = set()

    def pairs_from(edges):
        out, used = [], set()
        for a, b in edges:
            if a not in used and b not in used:
                out.append((a, b))
                used |= {a, b}
        return out

    def orient(matching):
        out = []
        for a, b in matching:
            if n.mask(a, b) == NTPPI:
                a, b = b, a
            out.append((a, b))
        return sorted(out)

    cands = [orient(nx.max_weight_matching(g, maxcardinality=True)),
             pairs_from(dc + nt), pairs_from(nt + dc)]
    rng = random.Random(seed)
    for _ in range(4):
        edges = dc + nt
        rng.shuffle(edges)
        cands.append(pairs_from(edges))
    for c in cands:
        key = tuple(sorted(c))
        if key not in seen:
            seen.add(key)
            yield c


def _as_chains(n: Network, pair):
    a, b = pair
    if n.mask(a, b) == DC:
        return [a], [b]
    return [a, b], []


def realize_core(n: Network, dim: int, seed: int = 0, retries: int | None = None) -> Realization | None:
    """A realization whose overlapping cliques share interior points, from a
    fragment construction or the small-network search."""
    if dim < 1:
        return None
    try:
        r = realize_fragment(n, dim, retries)
    except (RealizationError, GeometryError, NetworkError):
        r = None
    if r is not None and maximal_oclique_ok(r.regions)[0]:
        r.oclique_common_part = True
        return r
    return realize_small_search(n, dim, seed)


def peel_pairs(n: Network, dim: int, seed: int = 0, retries: int | None = None) -> Realization | None:
    """Set aside disjoint DC/NTPP pairs, realize the rest in fewer dimensions
    and add each pair back with the chain lift."""
    for pairs in _pair_orders(n, seed):
        l = len(pairs)
        if l == 0:
            return None
        for t in range(max(0, l - dim + 1), l):
            kept = pairs[:t]
            lifted = pairs[t:]
            core_vars = [v for v in n.vars if not any(v in p for p in lifted)]
            core_dim = dim - len(lifted)
            if not core_vars:
                continue
            base = realize_core(n.restrict(core_vars), core_dim, seed, retries)
            if base is None:
                continue
            try:
                for pair in lifted:
                    ca, cb = _as_chains(n, pair)
                    base = lift_ntpp_dc(n, base, ca, cb, retries=retry_budget(retries))
            except (RealizationError, NetworkError, GeometryError):
                continue
            return base
    return None


# -- orchestration --------------------------------------------------------------

def prepare(n: Network, seed: int = 0, order=VALUE_ORDER) -> tuple[Network, Network, dict[str, str]]:
    """(atomic refinement, EQ quotient, variable -> representative)."""
    closed, trace = path_consistency(n, record=False)
    if not trace.consistent:
        raise InconsistentNetworkError("network is inconsistent (path consistency failed)")
    atomic = closed if closed.is_atomic else atomic_refinement(closed, seed=seed or None, order=order)
    if atomic is None:
        raise InconsistentNetworkError("network has no consistent atomic refinement")
    quotient, rep = merge_eq_map(atomic)
    return atomic, quotient, rep


def guaranteed_dim(n: Network) -> int:
    """Dimension the pipeline aims for when none is given."""
    m = len(n)
    fb = classify_fragment(n)
    if fb.bound is not None:
        return fb.bound
    if m <= 3:
        return 2
    return max(2, math.ceil((m - 1) / 2))


def _attempt(q: Network, dim: int, seed: int, retries) -> Realization | None:
    r = None
    try:
        r = realize_fragment(q, dim, retries)
    except (RealizationError, GeometryError):
        r = None
    if r is None:
        r = realize_anchor_hulls(q, dim, retry_budget(retries))
    if r is None and len(q) <= 8:
        r = realize_small_search(q, dim, seed)
    if r is None:
        r = peel_pairs(q, dim, seed, retries)
    if r is None and dim >= 2 and not q.used_relations() & ~(EC | PO | TPP | TPPI | EQ):
        r = cone_search(q, dim, seed)
    if r is None:
        return None
    return embed(q, r, dim) if r.dim < dim else r


def realize(n: Network, target_dim: int | None = None, seed: int = 0, retries: int | None = None) -> Realization:
    """A verified convex realization of n in R^target_dim.

    Without a target, the fragment bound or the bound from the number of
    variables is used.  Raises InconsistentNetworkError for unsatisfiable
    networks and DimensionNotAchieved when every strategy fails at the
    target (the exception carries the lowest-dimensional success above it,
    if any)."""
    atomic, q, rep = prepare(n, seed)
    # a non-atomic input leaves a choice of refinement; nested-first ones suit
    # the set-model construction, so they are tried before the default one
    tries = [(atomic, q, rep)]
    if not n.is_atomic:
        alt = prepare(n, seed, NESTED_ORDER)
        if alt[0] != atomic:
            tries.insert(0, alt)
    dim = guaranteed_dim(tries[0][1]) if target_dim is None else target_dim
    if dim < 1:
        raise NetworkError("dimension must be at least 1")
    for atomic_, q_, rep_ in tries:
        r = _attempt(q_, dim, seed, retries)
        if r is not None:
            return _expand(atomic_, r, rep_)
    achieved = None
    for k in range(dim + 1, dim + len(q) + 2):
        got = _attempt(q, k, seed, retries)
        if got is not None:
            achieved = _expand(atomic, got, rep)
            break
    msg = f"no strategy realized the network in R^{dim}"
    if achieved is not None:
        msg += f"; realized in R^{achieved.dim}"
    raise DimensionNotAchieved(msg, dim, achieved)


def _expand(atomic: Network, r: Realization, rep: dict[str, str]) -> Realization:
    regions = {v: r.regions[rep[v]] for v in atomic.vars}
    out = Realization(r.dim, regions, oclique_common_part=r.oclique_common_part)
    rep_ = verify(atomic, out, check_common_part=False)
    if not rep_.ok:
        raise RealizationError("final verification failed: " + "; ".join(map(str, rep_.violations)))
    return out


__all__ = [
    "DEFAULT_RETRIES", "RETRIES_ENV", "InconsistentNetworkError", "DimensionNotAchieved",
    "retry_budget", "realize_2d", "realize_fragment", "realize_small_search", "cone_search",
    "weak_search", "realize_core", "peel_pairs", "prepare", "guaranteed_dim", "realize", "STRATEGIES",
]
