"""Adding one dimension at a time.

``lift_ntpp_dc`` adds two NTPP-chains whose tops are disconnected as prisms
over eroded footprints; every old region becomes a prism whose height range
is read off its relations to the chains.  ``lift_weak_ec`` turns a weak
solution into an exact one by coning every region towards the origin, with an
optional extra region placed on the cones.  ``embed`` pads a realization with
extra coordinates.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..algebra import DC, EC, EQ, NTPP, NTPPI, PO, TPP, TPPI
from ..geometry import DegenerateError, Polytope, box, convex_hull, erode, from_halfspaces
from ..network import Network, NetworkError
from .realization import OVERLAP, Realization, RealizationError, levels, maximal_oclique_ok, verify

PART = TPP | NTPP | EQ
DEFAULT_RETRIES = 12


def _holds(n: Network, a: str | None, mask: int, b: str | None) -> bool:
    """a (mask) b; a missing chain end counts as disconnected from everything."""
    if a is None or b is None:
        return bool(mask & DC)
    return bool(n.mask(a, b) & mask)


@dataclass
class LiftState:
    chain_a: list[str]
    chain_b: list[str]
    heights: dict[str, tuple[Fraction, Fraction]] = field(default_factory=dict)
    epsilon: Fraction = Fraction(0)
    eroded: dict[str, Polytope] = field(default_factory=dict)


def chain_heights(r: int, s: int) -> tuple[list, list, list, list]:
    """0 < a_r^- < ... < a_1^- < a_1^+ < ... < a_r^+ and the mirror image for b."""
    am = [None] + [Fraction(2 * (r - i + 1)) for i in range(1, r + 1)]
    ap = [None] + [Fraction(2 * (r + i)) for i in range(1, r + 1)]
    bp = [None] + [Fraction(-2 * (s - j + 1)) for j in range(1, s + 1)]
    bm = [None] + [Fraction(-2 * (s + j)) for j in range(1, s + 1)]
    return am, ap, bm, bp


def _upper(n, v, A, am, ap, B, bm, bp, dv):
    """Top of v's height range from its relations to the chains."""
    r, s = len(A) - 1, len(B) - 1
    ar = A[r] if r else None
    bs = B[s] if s else None
    if r:
        if _holds(n, ar, NTPP, v):
            return ap[r] + dv
        for i in range(1, r + 1):
            if n.mask(A[i], v) == TPP:
                return ap[i]
        for i in range(1, r):
            if n.mask(A[i], v) == NTPP and not n.mask(A[i + 1], v) & PART:
                return ap[i] + dv
        if n.mask(A[1], v) & (PO | TPPI | NTPPI):
            return (am[1] + ap[1]) / 2 + dv
        if n.mask(A[1], v) == EC:
            return am[1]
        for i in range(2, r + 1):
            if n.mask(A[i - 1], v) == DC:
                if n.mask(A[i], v) & OVERLAP:
                    return (am[i] + am[i - 1]) / 2 + dv
                if n.mask(A[i], v) == EC:
                    return am[i]
    if _holds(n, ar, DC, v) and not (bs is not None and n.mask(v, bs) & PART):
        return dv
    for j in range(1, s + 1):
        if n.mask(v, B[j]) == TPP:
            return bp[j]
    for j in range(2, s + 1):
        if n.mask(v, B[j]) == NTPP and not n.mask(v, B[j - 1]) & PART:
            return (bp[j] + bp[j - 1]) / 2 + dv
    if s and n.mask(v, B[1]) == NTPP:
        return (bp[1] + bm[1]) / 2 + dv
    raise RealizationError(f"no height case applies to {v}")


def lift_ntpp_dc(n: Network, base: Realization, chain_a, chain_b, retries: int = DEFAULT_RETRIES,
                 state: LiftState | None = None) -> Realization:
    """Realization of n over base's variables plus both chains, one dimension up.

    chain_a = [a_1, ..., a_r] with a_i NTPP a_{i+1}, likewise chain_b, and
    a_r DC b_s when both are nonempty.  base must be an exact realization in
    which every clique of overlapping regions has a common interior point.
    """
    chain_a, chain_b = list(chain_a), list(chain_b)
    _check_chain(n, chain_a)
    _check_chain(n, chain_b)
    if chain_a and chain_b and n.mask(chain_a[-1], chain_b[-1]) != DC:
        raise NetworkError("chain tops must be DC")
    old = list(base.regions)
    if set(old) & set(chain_a + chain_b):
        raise NetworkError("chain variables must be new")
    k = base.dim
    full = n.restrict(old + chain_a + chain_b)
    lv = levels(full)
    r, s = len(chain_a), len(chain_b)
    am, ap, bm, bp = chain_heights(r, s)
    A = [None] + chain_a
    B = [None] + chain_b
    if old:
        lo = [min(p.bbox()[0][i] for p in base.regions.values()) - 1 for i in range(k)]
        hi = [max(p.bbox()[1][i] for p in base.regions.values()) + 1 for i in range(k)]
    else:
        lo, hi = [Fraction(-1)] * k, [Fraction(1)] * k
    outer = box(lo, hi)
    extent = max(b - a for a, b in zip(lo, hi))
    delta = extent / (16 * max(len(full), 1))
    eps = Fraction(1, 4 * (max(lv.values(), default=0) + 1))
    for _ in range(retries + 1):
        try:
            regions = _lift_attempt(full, base, A, B, am, ap, bm, bp, lv, outer, delta, eps, state)
        except DegenerateError:
            regions = None
        if regions is not None:
            out = Realization(k + 1, regions, oclique_common_part=True)
            if verify(full, out).ok:
                return out
        delta /= 2
        eps /= 2
    raise RealizationError("chain lift: retry budget exhausted")


def _check_chain(n: Network, chain):
    for x, y in zip(chain, chain[1:]):
        if n.mask(x, y) != NTPP:
            raise NetworkError(f"chain needs {x} NTPP {y}")


def _footprints(n, base, chain, outer, delta):
    feet = {}
    prev = outer
    for x in reversed(chain):
        rows = [tuple(Fraction(c) for c in f) for f in erode(prev, delta).facets]
        for v, p in base.regions.items():
            rel = n.mask(x, v)
            if rel == TPP or rel == EQ:
                rows += [tuple(Fraction(c) for c in f) for f in p.facets]
            elif rel == NTPP:
                rows += [tuple(Fraction(c) for c in f) for f in erode(p, delta).facets]
        got = from_halfspaces(rows, base.dim)
        if got is None:
            raise DegenerateError(f"footprint of {x} collapsed")
        feet[x] = got
        prev = got
    return feet


def _lift_attempt(n, base, A, B, am, ap, bm, bp, lv, outer, delta, eps, state):
    chain_a, chain_b = A[1:], B[1:]
    feet = _footprints(n, base, chain_a, outer, delta)
    feet.update(_footprints(n, base, chain_b, outer, delta))
    regions = {}
    heights = {}
    for i, x in enumerate(chain_a, 1):
        heights[x] = (am[i], ap[i])
    for j, y in enumerate(chain_b, 1):
        heights[y] = (bm[j], bp[j])
    for v in base.regions:
        dv = lv[v] * eps
        top = _upper(n, v, A, am, ap, B, bm, bp, dv)
        # the bottom is the top of the mirrored problem: swap chains, negate heights
        bot = -_upper(n, v, B, [None] + [-x for x in bp[1:]], [None] + [-x for x in bm[1:]],
                      A, [None] + [-x for x in ap[1:]], [None] + [-x for x in am[1:]], dv)
        if not bot < top:
            raise DegenerateError(f"empty height range for {v}")
        heights[v] = (bot, top)
    for x, foot in feet.items():
        regions[x] = foot.prism(*heights[x])
    for v, p in base.regions.items():
        regions[v] = p.prism(*heights[v])
    if state is not None:
        state.heights = heights
        state.epsilon = eps
        state.eroded = feet
    return regions


def lift_condition(n: Network, base_vars, u: str) -> str | None:
    """Which cone placement fits u: 'A' (u touches or overlaps everything),
    'B' (u contains or overlaps everything), or None."""
    rels = [n.mask(v, u) for v in base_vars]
    if all(r & (EC | PO) for r in rels):
        return "A"
    if all(r & (TPP | PO) for r in rels):
        return "B"
    return None


def _cone(p: Polytope, lo: Fraction, hi: Fraction) -> Polytope:
    """{(l x, l) : x in p, l in [lo, hi]}."""
    pts = []
    for lam in (lo, hi):
        if lam == 0:
            pts.append((Fraction(0),) * (p.dim + 1))
        else:
            pts += [tuple(lam * c for c in v) + (lam,) for v in p.vertices]
    return convex_hull(pts)


def lift_weak_ec(n: Network, base: Realization, u: str | None = None) -> Realization:
    """Exact realization one dimension up from a weak one by coning towards the
    origin, so disjoint regions touch there and nested ones become tangential.

    The network over the base variables (and u) may only use EC, PO, TPP and
    TPPi.  With u given, it is added as a truncated cone over a region holding
    all others."""
    names = list(base.regions)
    full = n.restrict(names + ([u] if u else []))
    if full.used_relations() & ~(EC | PO | TPP | TPPI | EQ):
        raise NetworkError("cone lift needs a network over {EC, PO, TPP, TPPi}")
    k = base.dim
    lam = {v: Fraction(1) for v in names}
    regions = {}
    if u is not None:
        case = lift_condition(full, names, u)
        if case is None:
            raise NetworkError(f"{u} can neither touch/overlap nor contain/overlap every other region")
        lo = [min(p.bbox()[0][i] for p in base.regions.values()) - 1 for i in range(k)]
        hi = [max(p.bbox()[1][i] for p in base.regions.values()) + 1 for i in range(k)]
        hold = box(lo, hi)
        for v in names:
            rel = full.mask(v, u)
            if case == "A":
                lam[v] = Fraction(1) if rel == EC else Fraction(3, 2)
            else:
                lam[v] = Fraction(1) if rel == TPP else Fraction(3)
        regions[u] = _cone(hold, Fraction(1) if case == "A" else Fraction(0), Fraction(2))
    for v in names:
        regions[v] = _cone(base.regions[v], Fraction(0), lam[v])
    out = Realization(k + 1, regions, oclique_common_part=True)
    rep = verify(full, out)
    if not rep.ok:
        raise RealizationError("cone lift failed verification: " + "; ".join(map(str, rep.violations)))
    return out


def embed(n: Network, r: Realization, dim: int) -> Realization:
    """Pad r to R^dim by a product with a cube whose size grows with the
    NTPP level, so strict containment stays strict and nothing else changes."""
    if dim < r.dim:
        raise NetworkError("cannot embed into fewer dimensions")
    if dim == r.dim:
        return r
    sub = n.restrict(list(r.regions))
    lv = levels(sub)
    regions = {v: p.cube_product(lv[v], dim - r.dim) for v, p in r.regions.items()}
    out = Realization(dim, regions, r.weak, r.oclique_common_part)
    if not verify(sub, out, check_common_part=False).ok:
        raise RealizationError("embedding failed verification")
    return out


__all__ = [
    "LiftState", "chain_heights", "lift_ntpp_dc", "lift_weak_ec", "lift_condition", "embed",
]
