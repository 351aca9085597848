"""Set-model realizer: minimal regions sit at simplex vertices and every other
region is the hull of small cubes around the minimal regions it contains.

Works for networks without EC whose relations agree with the set semantics
of their minimal regions (disjoint, nested or properly overlapping), in
dimension (number of minimal regions - 1).  Cube sizes grow with the number
of NTPP steps below a region, so NTPP needs no extra minimal region.
"""
from __future__ import annotations

from fractions import Fraction

from ..algebra import DC, EQ, NTPP, NTPPI, PO, TPP, TPPI
from ..network import Network
from .realization import Realization, anchor_hull, maximal_oclique_ok, verify

PART = TPP | NTPP


def atom_sets(n: Network) -> tuple[list[str], dict[str, frozenset]] | None:
    """(minimal regions, region -> minimal regions inside it) when the network
    reads as a set model over them, else None."""
    vs = n.vars
    atoms = [v for v in vs if not any(u != v and n.mask(u, v) & PART for u in vs)]
    sets = {v: frozenset(a for a in atoms if a == v or n.mask(a, v) & PART) for v in vs}
    for i, j in n.pairs():
        u, v = vs[i], vs[j]
        r, su, sv = n.mask(i, j), sets[u], sets[v]
        if r == DC:
            ok = not su & sv
        elif r == PO:
            ok = bool(su & sv) and not su <= sv and not sv <= su
        elif r == TPP:
            ok = su < sv
        elif r == NTPP:
            ok = su <= sv
        elif r == TPPI:
            ok = sv < su
        elif r == NTPPI:
            ok = sv <= su
        else:
            ok = False
        if not ok:
            return None
    return atoms, sets


def _depths(n: Network, atom: str, members: list[str]) -> dict[str, int]:
    """Most NTPP steps on a containment chain from atom up to each region."""
    order = sorted(members, key=lambda v: sum(1 for w in members if n.mask(w, v) & PART))
    depth = {}
    for v in order:
        best = 0
        for w in members:
            if w != v and w in depth and n.mask(w, v) & PART:
                best = max(best, depth[w] + (1 if n.mask(w, v) == NTPP else 0))
        depth[v] = best
    return depth


def realize_anchor_hulls(n: Network, dim: int, retries: int = 12) -> Realization | None:
    if not n.is_atomic or n.used_relations() & ~(DC | PO | TPP | NTPP | TPPI | NTPPI | EQ):
        return None
    got = atom_sets(n)
    if got is None:
        return None
    atoms, sets = got
    k = max(len(atoms) - 1, 1)
    if k > dim:
        return None
    points = {}
    for idx, a in enumerate(atoms):
        p = [Fraction(0)] * dim
        if idx:
            p[idx - 1] = Fraction(1)
        points[a] = p
    depth = {a: _depths(n, a, [v for v in n.vars if a in sets[v]]) for a in atoms}
    top = max((d for a in atoms for d in depth[a].values()), default=0)
    theta = Fraction(1, 8 * (len(atoms) + 1) * (top + 1))
    for _ in range(retries + 1):
        regions = {
            v: anchor_hull([(points[a], theta * (1 + depth[a][v])) for a in sorted(sets[v])])
            for v in n.vars
        }
        r = Realization(dim, regions)
        if verify(n, r).ok:
            # overlapping triples need not share a part here (b_12, b_13, b_23 say)
            r.oclique_common_part = maximal_oclique_ok(regions)[0]
            return r
        theta /= 2
    return None


__all__ = ["atom_sets", "realize_anchor_hulls"]
