"""Planar constructions from anchor points on the parabola t -> (t, t^2)."""
from __future__ import annotations

from fractions import Fraction

from ..algebra import DC, EC, EQ, NTPP, NTPPI, PO, TPP, TPPI
from ..geometry import DegenerateError, moment_point
from ..network import Network, NetworkError
from .intervals import forest_intervals
from .realization import Realization, RealizationError, anchor_hull, is_valid, levels

DEFAULT_RETRIES = 12


def _check(n: Network, allowed: int, what: str):
    if not n.is_atomic:
        raise NetworkError(f"{what} needs an atomic network")
    if n.used_relations() & ~(allowed | EQ):
        raise NetworkError(f"network uses relations outside the {what} fragment")


def _strengthen(n: Network, swap: dict[int, int]) -> Network:
    rows = n.matrix()
    for i in range(len(rows)):
        for j in range(len(rows)):
            rows[i][j] = swap.get(rows[i][j], rows[i][j])
    return n.with_masks(rows)


def _theta0(points, n: Network, lv: dict[str, int]) -> Fraction:
    gap = None
    for i, p in enumerate(points):
        for q in points[i + 1:]:
            g = max(abs(a - b) for a, b in zip(p, q))
            if g and (gap is None or g < gap):
                gap = g
    gap = gap if gap is not None else Fraction(1)
    return gap / (8 * max(len(n), 1) * max(lv.values(), default=1))


def _search_theta(n: Network, build, theta: Fraction, retries: int) -> Realization:
    for _ in range(retries + 1):
        try:
            r = build(theta)
        except DegenerateError:
            r = None
        if r is not None and is_valid(n, r):
            return r
        theta /= 2
    raise RealizationError("planar construction: theta schedule exhausted")


def _parabola(t) -> tuple:
    return moment_point(t, 2)


def realize_2d_dc_pp(n: Network, retries: int = DEFAULT_RETRIES) -> Realization:
    """{DC, TPP, NTPP}: hulls of cubes around each descendant's interval endpoints."""
    _check(n, DC | TPP | TPPI | NTPP | NTPPI, "DC/PP")
    weak = _strengthen(n, {TPP: NTPP, TPPI: NTPPI})
    iv = forest_intervals(weak)
    lv = levels(n)
    anchors = {v: (_parabola(lo), _parabola(hi)) for v, (lo, hi) in iv.items()}
    pts = [p for pair in anchors.values() for p in pair]

    def build(theta):
        regions = {}
        for j, v in enumerate(n.vars):
            items = [(p, theta) for p in anchors[v]]
            for i, u in enumerate(n.vars):
                r = n.mask(i, j)
                if r == TPP:
                    items += [(p, theta) for p in anchors[u]]
                elif r == NTPP:
                    items += [(p, lv[v] * theta) for p in anchors[u]]
            regions[v] = anchor_hull(items)
        return Realization(2, regions)

    return _search_theta(n, build, _theta0(pts, n, lv), retries)


def realize_2d_po_pp(n: Network, retries: int = DEFAULT_RETRIES) -> Realization:
    """{PO, TPP, NTPP}: every region contains cubes at q0, q1 plus its own anchor."""
    _check(n, PO | TPP | TPPI | NTPP | NTPPI, "PO/PP")
    lv = levels(n)
    q0, q1 = _parabola(0), _parabola(1)
    # anchors start at t = 2 so that none coincides with q1
    anchor = {v: _parabola(i) for i, v in enumerate(n.vars, 2)}
    pts = [q0, q1] + list(anchor.values())

    def build(theta):
        regions = {}
        for j, v in enumerate(n.vars):
            rad = lv[v] * theta
            items = [(anchor[v], 0), (q0, rad), (q1, rad)]
            for i, u in enumerate(n.vars):
                r = n.mask(i, j)
                if r == TPP:
                    items.append((anchor[u], 0))
                elif r == NTPP:
                    items.append((anchor[u], rad))
            regions[v] = anchor_hull(items)
        return Realization(2, regions)

    return _search_theta(n, build, _theta0(pts, n, lv), retries)


def realize_2d_ec_pp(n: Network, retries: int = DEFAULT_RETRIES) -> Realization:
    """{EC, TPP, NTPP}: regions touching something meet at the origin.

    The EC-involved regions form a tangential family of polygons through
    r0 = (0, 0); every other region contains all of them and is built from
    its own parabola point plus a cube around r0.
    """
    _check(n, EC | TPP | TPPI | NTPP | NTPPI, "EC/PP")
    vs = n.vars
    touching = [v for i, v in enumerate(vs) if any(n.mask(i, j) == EC for j in range(len(vs)) if j != i)]
    core = n.restrict(touching)
    if core.used_relations() & (NTPP | NTPPI):
        raise NetworkError("EC-involved regions must not be NTPP-related")
    weak = _strengthen(core, {EC: DC, TPP: NTPP, TPPI: NTPPI})
    iv = forest_intervals(weak) if touching else {}
    # shift so every endpoint is positive
    anchors = {v: (_parabola(lo), _parabola(hi)) for v, (lo, hi) in iv.items()}
    top = max((hi for _, hi in iv.values()), default=Fraction(0))
    rest = [v for v in vs if v not in anchors]
    own = {v: _parabola(top + 1 + k) for k, v in enumerate(rest)}
    r0 = _parabola(0)
    lv = levels(n)
    pts = [r0] + [p for pair in anchors.values() for p in pair] + list(own.values())

    def pts_of(u, radius):
        if u in anchors:
            return [(p, radius) for p in anchors[u]]
        return [(own[u], radius)]

    def build(theta):
        regions = {}
        for j, v in enumerate(vs):
            if v in anchors:
                items = [(r0, 0)] + [(p, 0) for p in anchors[v]]
                for i, u in enumerate(vs):
                    if n.mask(i, j) == TPP:
                        items += pts_of(u, 0)
            else:
                rad = lv[v] * theta
                items = [(own[v], 0), (r0, rad)]
                for i, u in enumerate(vs):
                    r = n.mask(i, j)
                    if r == TPP:
                        items += pts_of(u, 0)
                    elif r == NTPP:
                        items += pts_of(u, rad)
            regions[v] = anchor_hull(items)
        return Realization(2, regions)

    return _search_theta(n, build, _theta0(pts, n, lv), retries)
