"""Three-dimensional constructions from Voronoi cells of points on the moment curve."""
from __future__ import annotations

from fractions import Fraction

from ..algebra import DC, EC, EQ, NTPP, NTPPI, PO, TPP, TPPI
from ..geometry import (
    DegenerateError, Polytope, _norm_upper, bisector, box, convex_hull, fit_map,
    from_halfspaces, halfspace_vertices, inner_cube, moment_point, shared_face_rank, voronoi_cells,
)
from ..network import Network, NetworkError
from .realization import Realization, RealizationError, is_valid

DEFAULT_RETRIES = 12


def neighborly_cells(count: int, dim: int = 3, params=None) -> list[Polytope]:
    """Voronoi cells of M(1..count) in a box big enough that every two cells
    share a facet."""
    params = list(params) if params is not None else list(range(1, count + 1))
    sites = [moment_point(t, dim) for t in params]
    spread = max(max(abs(x) for x in s) for s in sites)
    half = 4 * spread + 4
    for _ in range(20):
        cells = voronoi_cells(sites, box([-half] * dim, [half] * dim))
        if all(shared_face_rank(cells[i], cells[j]) == dim - 1
               for i in range(count) for j in range(i + 1, count)):
            return cells
        half *= 2
    raise RealizationError("could not find a box keeping all Voronoi cells adjacent")


def _cut(cell: Polytope, row, eps: Fraction) -> Polytope | None:
    """cell intersected with the half-space row pushed inward by about eps."""
    d = cell.dim
    h = row[:d]
    c = row[d]
    norm = _norm_upper([int(x) for x in h])   # sites are integral, so is h
    rows = [tuple(Fraction(x) for x in f) for f in cell.facets]
    rows.append(tuple(h) + (c - eps * norm,))
    return from_halfspaces(rows, d)


def _face_center(a: Polytope, b: Polytope):
    verts = halfspace_vertices(list(a.facets) + list(b.facets), a.dim)
    if not verts:
        return None
    k = len(verts)
    return tuple(sum(v[i] for v in verts) / k for i in range(a.dim))


def realize_3d_ec_dc_po(n: Network, retries: int = DEFAULT_RETRIES) -> Realization:
    if not n.is_atomic:
        raise NetworkError("needs an atomic network")
    if n.used_relations() & ~(DC | EC | PO | EQ):
        raise NetworkError("network uses relations outside {EC, DC, PO}")
    vs = n.vars
    m = len(vs)
    if m == 1:
        return Realization(3, {vs[0]: box([0, 0, 0], [1, 1, 1])})
    cells = neighborly_cells(m)
    sites = [moment_point(t, 3) for t in range(1, m + 1)]
    eps = Fraction(1, 4 * m)
    for _ in range(retries + 1):
        try:
            regions = _ec_dc_po_attempt(n, cells, sites, eps)
        except DegenerateError:
            regions = None
        if regions is not None:
            r = Realization(3, dict(zip(vs, regions)))
            if is_valid(n, r):
                return r
        eps /= 4
    raise RealizationError("neighborly construction: epsilon schedule exhausted")


def _ec_dc_po_attempt(n: Network, cells, sites, eps):
    m = len(cells)
    regions = list(cells)
    for i in range(m):
        for j in range(i + 1, m):
            if n.mask(i, j) == DC:
                got = _cut(regions[i], bisector(sites[i], sites[j]), eps)
                if got is None:
                    return None
                regions[i] = got
    for i in range(m):
        for j in range(i + 1, m):
            if n.mask(i, j) == PO:
                c = _face_center(regions[i], regions[j])
                if c is None:
                    return None
                # step from the shared face into cell i, along i's outward-normal reversed
                row = bisector(sites[i], sites[j])
                h = row[:3]
                norm = _norm_upper([int(x) for x in h])
                inside = tuple(ci - eps * hi / norm for ci, hi in zip(c, h))
                if not regions[i].contains(inside, strict=True):
                    return None
                regions[j] = convex_hull(list(regions[j].vertices) + [inside])
    return regions


def realize_3d_ec_dc_ntpp(n: Network, retries: int = DEFAULT_RETRIES) -> Realization:
    """Outermost regions via the neighborly construction, each NTPP family
    realized recursively and scaled into its container."""
    if not n.is_atomic:
        raise NetworkError("needs an atomic network")
    if n.used_relations() & ~(DC | EC | NTPP | NTPPI | EQ):
        raise NetworkError("network uses relations outside {EC, DC, NTPP}")
    return nested_realization(n, lambda sub: realize_3d_ec_dc_po(sub, retries), 3)


def nested_groups(n: Network) -> tuple[list[str], dict[str, list[str]]] | None:
    """Split n into regions that are not NTPP-inside anything (tops) and, per
    top, the regions whose smallest NTPP-container among the tops it is.

    Returns None unless every region of a group relates to everything outside
    the group exactly as placing the group deep inside its top would force:
    DC to regions disconnected from or touching the top, NTPP inside regions
    containing the top."""
    vs = n.vars
    m = len(vs)
    tops = [i for i in range(m) if not any(n.mask(i, j) == NTPP for j in range(m) if j != i)]
    groups: dict[int, list[int]] = {t: [] for t in tops}
    owner = {}
    for u in range(m):
        if u in groups:
            continue
        holders = [t for t in tops if n.mask(u, t) == NTPP]
        least = [t for t in holders if all(t == s or n.mask(t, s) & (TPP | NTPP) for s in holders)]
        if len(least) != 1:
            return None
        groups[least[0]].append(u)
        owner[u] = least[0]
    for u, v in owner.items():
        for w in range(m):
            if w == v or owner.get(w) == v:
                continue
            wv = n.mask(w, v)
            if wv & (DC | EC):
                want = DC
            elif wv & (TPPI | NTPPI):
                want = NTPP
            else:
                return None
            if n.mask(u, w) != want:
                return None
    return [vs[t] for t in tops], {vs[t]: [vs[u] for u in g] for t, g in groups.items()}


def nested_realization(n: Network, flat, dim: int, inner=None) -> Realization:
    """Realize the NTPP-maximal regions with ``flat``, then realize each
    region's NTPP-descendants with ``inner`` (default: recursively) and fit
    them inside it (see nested_groups)."""
    split = nested_groups(n)
    if split is None:
        raise RealizationError("NTPP groups are not closed")
    tops, groups = split
    base = flat(n.restrict(tops))
    regions = dict(base.regions)
    for v in tops:
        group = groups[v]
        if not group:
            continue
        sub_net = n.restrict(group)
        sub = inner(sub_net) if inner is not None else nested_realization(sub_net, flat, dim)
        mp = fit_map(list(sub.regions.values()), regions[v])
        for u, p in sub.regions.items():
            regions[u] = mp.apply(p)
    r = Realization(dim, regions)
    if not is_valid(n, r):
        raise RealizationError("nested construction failed verification")
    return r
