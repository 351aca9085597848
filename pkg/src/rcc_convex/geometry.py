"""Exact rational convex geometry.

Polytopes carry both a vertex list (Fractions) and a facet list of primitive
integer rows ``(h_1, ..., h_d, c)`` meaning ``h . x <= c``.  Conversions
between the two go through one double-description routine that works on
integer cones, so nothing here ever rounds.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import product
from typing import Iterable, Sequence

from .algebra import Base

Point = tuple  # tuple of Fraction


class GeometryError(ValueError):
    pass


class DegenerateError(GeometryError):
    """Input does not span the ambient space (or a result collapsed)."""


# -- small exact helpers -----------------------------------------------------

def frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass ints, Fractions or 'p/q' strings")
    return Fraction(x)


def point(coords: Iterable) -> Point:
    return tuple(frac(c) for c in coords)


def fmt_frac(x: Fraction) -> str:
    x = frac(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def _primitive(vec: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for x in vec:
        g = math.gcd(g, x)
    if g <= 1:
        return tuple(vec)
    return tuple(x // g for x in vec)


def _int_row(coeffs: Sequence[Fraction]) -> tuple[int, ...]:
    """Scale a rational vector to a primitive integer vector (positive factor)."""
    den = reduce(_lcm, (frac(c).denominator for c in coeffs), 1)
    return _primitive([int(frac(c) * den) for c in coeffs])


def _hom(p: Point) -> tuple[int, ...]:
    """Homogeneous integer form (X_1, ..., X_d, D) with p = X / D, D > 0."""
    den = reduce(_lcm, (c.denominator for c in p), 1)
    return tuple(int(c * den) for c in p) + (den,)


def rank(rows: Sequence[Sequence]) -> int:
    m = [[frac(x) for x in r] for r in rows]
    if not m:
        return 0
    ncol = len(m[0])
    r = 0
    for c in range(ncol):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, len(m)):
            if m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def int_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix by fraction-free elimination."""
    m = [list(r) for r in rows]
    if not m:
        return 0
    r = 0
    for c in range(len(m[0])):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pr = m[r]
        p = pr[c]
        for i in range(r + 1, len(m)):
            f = m[i][c]
            if f:
                row = [p * x - f * y for x, y in zip(m[i], pr)]
                g = 0
                for x in row:
                    g = math.gcd(g, x)
                m[i] = [x // g for x in row] if g > 1 else row
        r += 1
        if r == len(m):
            break
    return r


def affine_rank(points: Sequence[Point]) -> int:
    if not points:
        return -1
    p0 = points[0]
    return rank([[a - b for a, b in zip(p, p0)] for p in points[1:]])


def solve_linear(a: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """Unique solution of a square system, or None if singular."""
    n = len(a)
    m = [[frac(x) for x in row] + [frac(y)] for row, y in zip(a, b)]
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return None
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for i in range(n):
            if i != c and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return [m[i][n] for i in range(n)]


def nullspace_vector(a: Sequence[Sequence]) -> list[Fraction]:
    """One nonzero vector of the kernel of a (rows x n, rank n-1 expected)."""
    m = [[frac(x) for x in row] for row in a]
    n = len(m[0])
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    if not free:
        raise GeometryError("trivial kernel")
    f = free[0]
    v = [Fraction(0)] * n
    v[f] = Fraction(1)
    for row_i, c in enumerate(pivots):
        v[c] = -m[row_i][f]
    return v


# -- double description --------------------------------------------------------

def _independent_rows(rows: Sequence[Sequence[int]], k: int) -> list[int]:
    basis: list[int] = []
    echelon: list[tuple[int, list[Fraction]]] = []
    for idx, row in enumerate(rows):
        v = [Fraction(x) for x in row]
        for col, e in echelon:
            if v[col] != 0:
                f = v[col] / e[col]
                v = [a - f * b for a, b in zip(v, e)]
        col = next((c for c in range(k) if v[c] != 0), None)
        if col is None:
            continue
        echelon.append((col, v))
        basis.append(idx)
        if len(basis) == k:
            break
    return basis


def extreme_rays(rows: Sequence[Sequence[int]], k: int) -> list[tuple[int, ...]]:
    """Extreme rays of the pointed cone {y : row . y <= 0 for every row}.

    Incremental double description with the combinatorial adjacency test.
    Rays are primitive integer vectors.  Raises DegenerateError when the rows
    do not have rank k (the cone has a lineality space).
    """
    rows = list(dict.fromkeys(tuple(r) for r in rows))
    basis = _independent_rows(rows, k)
    if len(basis) < k:
        raise DegenerateError("cone is not pointed")
    bset = set(basis)
    inv = _invert([[Fraction(x) for x in rows[i]] for i in basis])
    rays: list[tuple[tuple[int, ...], int]] = []
    for j in range(k):
        vec = _int_row([-inv[i][j] for i in range(k)])
        zero = 0
        for t, bi in enumerate(basis):
            if t != j:
                zero |= 1 << bi
        rays.append((vec, zero))
    need = k - 2
    for idx, a in enumerate(rows):
        if idx in bset:
            continue
        bit = 1 << idx
        pos, neg, keep = [], [], []
        for vec, z in rays:
            s = 0
            for x, y in zip(a, vec):
                s += x * y
            if s > 0:
                pos.append((vec, z, s))
            elif s < 0:
                neg.append((vec, z, s))
                keep.append((vec, z))
            else:
                keep.append((vec, z | bit))
        if not pos:
            rays = keep
            continue
        zsets = [z for _, z in rays]
        added = []
        for pv, pz, ps in pos:
            for nv, nz, ns in neg:
                common = pz & nz
                if common.bit_count() < need:
                    continue
                # adjacent iff no third ray is tight on all of `common`
                if any(common & ~z == 0 and z != pz and z != nz for z in zsets):
                    continue
                vec = _primitive([ps * y - ns * x for x, y in zip(pv, nv)])
                added.append((vec, common | bit))
        rays = keep + added
        if not rays:
            break
    return [v for v, _ in rays]


def _invert(m: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(m)
    aug = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        piv = next(i for i in range(c, n) if aug[i][c] != 0)
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]


def _facets_of(points_hom: Sequence[tuple[int, ...]], d: int) -> list[tuple[int, ...]]:
    """Facet rows (h, c) of the hull of homogeneous points; rank must be d+1."""
    rows = [hp[:d] + (-hp[d],) for hp in points_hom]
    rays = extreme_rays(rows, d + 1)
    return [r for r in rays if any(r[:d])]


def _vertices_of(facets: Sequence[tuple[int, ...]], d: int) -> list[Point]:
    rows = [f[:d] + (-f[d],) for f in facets] + [(0,) * d + (-1,)]
    rays = extreme_rays(rows, d + 1)
    out = []
    for r in rays:
        t = r[d]
        if t > 0:
            out.append(tuple(Fraction(x, t) for x in r[:d]))
        elif t == 0 and any(r[:d]):
            raise GeometryError("half-space system is unbounded")
    return out


# -- polytopes -------------------------------------------------------------------

class Polytope:
    """Full-dimensional convex polytope with exact vertices and facets."""

    __slots__ = ("dim", "vertices", "facets", "_hv")

    def __init__(self, dim: int, vertices: Sequence[Point], facets: Sequence[tuple[int, ...]]):
        self.dim = dim
        self.vertices = tuple(sorted(vertices))
        self.facets = tuple(sorted(set(facets)))
        self._hv = tuple(_hom(v) for v in self.vertices)

    # evaluation ------------------------------------------------------------
    def _slacks(self, hp: tuple[int, ...]):
        d = self.dim
        den = hp[d]
        for f in self.facets:
            s = f[d] * den
            for i in range(d):
                s -= f[i] * hp[i]
            yield s

    def contains(self, p: Sequence, strict: bool = False) -> bool:
        hp = _hom(point(p))
        if strict:
            return all(s > 0 for s in self._slacks(hp))
        return all(s >= 0 for s in self._slacks(hp))

    def contains_polytope(self, other: "Polytope", strict: bool = False) -> bool:
        for hp in other._hv:
            for s in self._slacks(hp):
                if s < 0 or (strict and s == 0):
                    return False
        return True

    def __eq__(self, other) -> bool:
        return isinstance(other, Polytope) and self.dim == other.dim and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash((self.dim, self.vertices))

    def __repr__(self) -> str:
        return f"Polytope(dim={self.dim}, vertices={len(self.vertices)}, facets={len(self.facets)})"

    # derived ------------------------------------------------------------------
    def centroid(self) -> Point:
        n = len(self.vertices)
        return tuple(sum(v[i] for v in self.vertices) / n for i in range(self.dim))

    def bbox(self) -> tuple[Point, Point]:
        lo = tuple(min(v[i] for v in self.vertices) for i in range(self.dim))
        hi = tuple(max(v[i] for v in self.vertices) for i in range(self.dim))
        return lo, hi

    def halfspaces(self) -> list[tuple[tuple[Fraction, ...], Fraction]]:
        d = self.dim
        return [(tuple(Fraction(x) for x in f[:d]), Fraction(f[d])) for f in self.facets]

    def affine(self, scale, shift: Sequence) -> "Polytope":
        """Image under x -> scale * x + shift (scale > 0)."""
        scale = frac(scale)
        if scale <= 0:
            raise GeometryError("scale must be positive")
        shift = point(shift)
        verts = [tuple(scale * x + s for x, s in zip(v, shift)) for v in self.vertices]
        d = self.dim
        facets = []
        for f in self.facets:
            # h.(x - shift)/scale <= c  <=>  h.x <= c*scale + h.shift
            c = f[d] * scale + sum(f[i] * shift[i] for i in range(d))
            facets.append(_int_row([Fraction(x) for x in f[:d]] + [c]))
        return Polytope(d, verts, facets)

    def prism(self, lo, hi) -> "Polytope":
        """Product with the interval [lo, hi] as a new last coordinate."""
        lo, hi = frac(lo), frac(hi)
        if not lo < hi:
            raise DegenerateError("empty prism height")
        d = self.dim
        verts = [v + (lo,) for v in self.vertices] + [v + (hi,) for v in self.vertices]
        facets = [f[:d] + (0, f[d]) for f in self.facets]
        facets.append(_int_row([0] * d + [1, hi]))
        facets.append(_int_row([0] * d + [-1, -lo]))
        return Polytope(d + 1, verts, facets)

    def cube_product(self, half_width, extra: int) -> "Polytope":
        """Product with the cube [-w, w]^extra appended as new coordinates."""
        w = frac(half_width)
        d = self.dim
        corners = list(product((-w, w), repeat=extra))
        verts = [v + c for v in self.vertices for c in corners]
        facets = [f[:d] + (0,) * extra + (f[d],) for f in self.facets]
        for i in range(extra):
            for sgn in (1, -1):
                row = [0] * (d + extra) + [w]
                row[d + i] = sgn
                facets.append(_int_row(row))
        return Polytope(d + extra, verts, facets)

    # serialization --------------------------------------------------------------
    def to_json(self) -> dict:
        return {"dim": self.dim, "vertices": [[fmt_frac(x) for x in v] for v in self.vertices]}

    @classmethod
    def from_json(cls, obj: dict) -> "Polytope":
        d = int(obj["dim"])
        pts = [point(v) for v in obj["vertices"]]
        if any(len(p) != d for p in pts):
            raise GeometryError("vertex dimension mismatch")
        return convex_hull(pts)


def interval(lo, hi) -> Polytope:
    lo, hi = frac(lo), frac(hi)
    if not lo < hi:
        raise DegenerateError("interval must have lo < hi")
    return Polytope(1, [(lo,), (hi,)], [_int_row([1, hi]), _int_row([-1, -lo])])


def box(lo: Sequence, hi: Sequence) -> Polytope:
    lo, hi = point(lo), point(hi)
    p = interval(lo[0], hi[0])
    for a, b in zip(lo[1:], hi[1:]):
        p = p.prism(a, b)
    return p


def convex_hull(points: Iterable[Sequence]) -> Polytope:
    pts = list(dict.fromkeys(point(p) for p in points))
    if not pts:
        raise DegenerateError("no points")
    d = len(pts[0])
    if any(len(p) != d for p in pts):
        raise GeometryError("mixed dimensions")
    if d == 1:
        xs = [p[0] for p in pts]
        return interval(min(xs), max(xs))
    hom = [_hom(p) for p in pts]
    facets = _facets_of(hom, d)
    if len(facets) < d + 1:
        raise DegenerateError("points do not span the ambient space")
    verts = []
    for p, hp in zip(pts, hom):
        tight = []
        for f in facets:
            s = f[d] * hp[d]
            for i in range(d):
                s -= f[i] * hp[i]
            if s == 0:
                tight.append(f[:d])
        if len(tight) >= d and int_rank(tight) == d:
            verts.append(p)
    return Polytope(d, verts, facets)


def from_halfspaces(rows: Iterable[Sequence], dim: int) -> Polytope | None:
    """Polytope {x : h.x <= c}; rows are (h_1..h_d, c) rationals.

    Returns None when the set is empty or not full-dimensional.
    """
    facets = list(dict.fromkeys(_int_row(r) for r in rows))
    if dim == 1:
        lo, hi = None, None
        for h, c in facets:
            if h == 0:
                if c < 0:
                    return None
                continue
            b = Fraction(c, h)
            if h > 0:
                hi = b if hi is None else min(hi, b)
            else:
                lo = b if lo is None else max(lo, b)
        if lo is None or hi is None:
            raise GeometryError("half-space system is unbounded")
        return interval(lo, hi) if lo < hi else None
    verts = _vertices_of(facets, dim)
    if len(verts) < dim + 1 or affine_rank(verts) < dim:
        return None
    return convex_hull(verts)


def halfspace_vertices(rows: Iterable[Sequence], dim: int) -> list[Point]:
    """All vertices of {x : h.x <= c}, possibly lower-dimensional; [] if empty."""
    facets = list(dict.fromkeys(_int_row(r) for r in rows))
    if dim == 1:
        lo, hi = None, None
        for h, c in facets:
            if h == 0:
                if c < 0:
                    return []
                continue
            b = Fraction(c, h)
            if h > 0:
                hi = b if hi is None else min(hi, b)
            else:
                lo = b if lo is None else max(lo, b)
        if lo > hi:
            return []
        return [(lo,)] if lo == hi else [(lo,), (hi,)]
    return _vertices_of(facets, dim)


def intersect(polys: Sequence[Polytope]) -> Polytope | None:
    """Full-dimensional intersection or None."""
    if not polys:
        raise GeometryError("nothing to intersect")
    d = polys[0].dim
    rows = [f for p in polys for f in p.facets]
    return from_halfspaces(rows, d)


# -- exact LP ------------------------------------------------------------------------

def _simplex_max(a: list[list[int]], b: list[int], c: list[int]) -> tuple[Fraction, list[Fraction]]:
    """max c.y  s.t.  a y <= b, y >= 0, with b >= 0 (slack basis feasible).

    Integer-preserving tableau (exact division pivots), Bland's rule.
    Raises GeometryError when unbounded.
    """
    m = len(a)
    n = len(c)
    width = n + m + 1
    tab = []
    for i in range(m):
        row = list(a[i]) + [0] * m + [b[i]]
        row[n + i] = 1
        tab.append(row)
    obj = [-x for x in c] + [0] * m + [0]
    basis = [n + i for i in range(m)]
    den = 1
    while True:
        enter = next((j for j in range(n + m) if obj[j] < 0), None)
        if enter is None:
            break
        leave = None
        for i in range(m):
            t = tab[i][enter]
            if t > 0:
                if leave is None:
                    leave = i
                    continue
                lhs = tab[i][-1] * tab[leave][enter]
                rhs = tab[leave][-1] * t
                if lhs < rhs or (lhs == rhs and basis[i] < basis[leave]):
                    leave = i
        if leave is None:
            raise GeometryError("LP is unbounded")
        prow = tab[leave]
        piv = prow[enter]
        for i in range(m):
            if i == leave:
                continue
            row = tab[i]
            f = row[enter]
            if f == 0:
                tab[i] = [x * piv // den for x in row]
            else:
                tab[i] = [(x * piv - f * y) // den for x, y in zip(row, prow)]
        f = obj[enter]
        obj = [(x * piv - f * y) // den for x, y in zip(obj, prow)]
        basis[leave] = enter
        den = piv
    y = [Fraction(0)] * n
    for i, var in enumerate(basis):
        if var < n:
            y[var] = Fraction(tab[i][-1], den)
    return Fraction(obj[-1], den), y


def max_slack(facet_rows: Sequence[tuple[int, ...]], dim: int) -> tuple[Fraction, Point]:
    """max s subject to h.x + s <= c for every row and s <= 1.

    Positive optimum: the half-spaces share an interior point; zero: they meet
    only in a lower-dimensional set; negative: the intersection is empty.
    Also returns the optimal x.
    """
    cs = [r[dim] for r in facet_rows]
    m0 = min(min(cs), 1) if cs else 1
    # s = m0 + w and x = xp - xn with w, xp, xn >= 0; x = 0, w = 0 is feasible
    a, b = [], []
    for r in facet_rows:
        h = list(r[:dim])
        a.append(h + [-x for x in h] + [1])
        b.append(r[dim] - m0)
    a.append([0] * (2 * dim) + [1])
    b.append(1 - m0)
    c = [0] * (2 * dim) + [1]
    opt, y = _simplex_max(a, b, c)
    x = tuple(y[i] - y[dim + i] for i in range(dim))
    return m0 + opt, x


def common_interior_point(polys: Sequence[Polytope]) -> Point | None:
    d = polys[0].dim
    s, x = max_slack([f for p in polys for f in p.facets], d)
    return x if s > 0 else None


# -- RCC8 between polytopes ---------------------------------------------------------

def _strictly_separated(a: Polytope, b: Polytope) -> bool:
    """Some facet of a has every vertex of b strictly outside."""
    d = a.dim
    for f in a.facets:
        ok = True
        for hp in b._hv:
            s = f[d] * hp[d]
            for i in range(d):
                s -= f[i] * hp[i]
            if s >= 0:
                ok = False
                break
        if ok:
            return True
    return False


def _vertex_strictly_inside(a: Polytope, b: Polytope) -> bool:
    for hp in a._hv:
        if all(s > 0 for s in b._slacks(hp)):
            return True
    return False


def _relation_prefix(a: Polytope, b: Polytope) -> Base | None:
    """Containment and cheap certificates shared by the routes below."""
    if a.dim != b.dim:
        raise GeometryError("dimension mismatch")
    a_in_b = b.contains_polytope(a)
    b_in_a = a.contains_polytope(b)
    if a_in_b and b_in_a:
        return Base.EQ
    if a_in_b:
        return Base.NTPP if b.contains_polytope(a, strict=True) else Base.TPP
    if b_in_a:
        return Base.NTPPI if a.contains_polytope(b, strict=True) else Base.TPPI
    if _vertex_strictly_inside(a, b) or _vertex_strictly_inside(b, a):
        return Base.PO
    if _strictly_separated(a, b) or _strictly_separated(b, a):
        return Base.DC
    return None


def rcc8_relation(a: Polytope, b: Polytope) -> Base:
    """Base relation between two full-dimensional polytopes.

    After the containment tests and cheap certificates, the remaining
    DC/EC/PO question is settled by the vertex set of a & b: empty means DC,
    lower-dimensional means EC, full-dimensional means PO.
    """
    rel = _relation_prefix(a, b)
    if rel is not None:
        return rel
    verts = halfspace_vertices(list(a.facets) + list(b.facets), a.dim)
    if not verts:
        return Base.DC
    return Base.EC if affine_rank(verts) < a.dim else Base.PO


def rcc8_relation_lp(a: Polytope, b: Polytope) -> Base:
    """Same relation, with the last step decided by the max-slack LP."""
    rel = _relation_prefix(a, b)
    if rel is not None:
        return rel
    s, _ = max_slack(list(a.facets) + list(b.facets), a.dim)
    if s < 0:
        return Base.DC
    if s == 0:
        return Base.EC
    return Base.PO


def rcc8_relation_dd(a: Polytope, b: Polytope) -> Base:
    """Same relation computed through the vertex set of the intersection.

    Independent of the LP: emptiness and dimension of a & b come from the
    double-description conversion instead.
    """
    if a.dim != b.dim:
        raise GeometryError("dimension mismatch")
    verts = halfspace_vertices(list(a.facets) + list(b.facets), a.dim)
    if not verts:
        return Base.DC
    if affine_rank(verts) < a.dim:
        return Base.EC
    inter = convex_hull(verts)
    if inter == a and inter == b:
        return Base.EQ
    if inter == a:
        touching = any(s == 0 for hp in a._hv for s in b._slacks(hp))
        return Base.TPP if touching else Base.NTPP
    if inter == b:
        touching = any(s == 0 for hp in b._hv for s in a._slacks(hp))
        return Base.TPPI if touching else Base.NTPPI
    return Base.PO


# -- constructions ------------------------------------------------------------------

def _norm_upper(h: Sequence[int]) -> int:
    """Integer r with ||h|| <= r <= 2 ||h|| (h nonzero integer vector)."""
    sq = sum(x * x for x in h)
    r = math.isqrt(sq)
    return r if r * r == sq else r + 1


def erode(p: Polytope, delta) -> Polytope:
    """Inner approximation of the erosion: contains E_{2 delta}, inside E_delta."""
    delta = frac(delta)
    if delta <= 0:
        raise GeometryError("delta must be positive")
    d = p.dim
    rows = [tuple(Fraction(x) for x in f[:d]) + (f[d] - delta * _norm_upper(f[:d]),) for f in p.facets]
    out = from_halfspaces(rows, d)
    if out is None:
        raise DegenerateError("erosion is empty or not full-dimensional")
    return out


def disc_polytope(center: Sequence, theta) -> Polytope:
    """Axis-aligned hypercube of half-width theta around center."""
    c = point(center)
    theta = frac(theta)
    if theta <= 0:
        raise GeometryError("theta must be positive")
    return box([x - theta for x in c], [x + theta for x in c])


def simplex_around(center: Sequence, theta) -> Polytope:
    """Small simplex with center in its interior: c + theta*e_i and c - theta*(1,..,1)."""
    c = point(center)
    theta = frac(theta)
    d = len(c)
    verts = []
    for i in range(d):
        v = list(c)
        v[i] += theta
        verts.append(tuple(v))
    verts.append(tuple(x - theta for x in c))
    return convex_hull(verts)


def moment_point(t, d: int) -> Point:
    if d < 1:
        raise GeometryError("dimension must be at least 1")
    t = frac(t)
    return tuple(t ** k for k in range(1, d + 1))


@dataclass(frozen=True)
class Hyperplane:
    normal: tuple
    offset: Fraction

    def value(self, x: Sequence) -> Fraction:
        return sum(frac(a) * frac(b) for a, b in zip(self.normal, x)) - self.offset

    def flipped(self) -> "Hyperplane":
        return Hyperplane(tuple(-x for x in self.normal), -self.offset)


def bisector(p: Point, q: Point) -> tuple[Fraction, ...]:
    """Row (h, c) of the half-space of points at least as close to p as to q."""
    h = [2 * (b - a) for a, b in zip(p, q)]
    c = sum(b * b for b in q) - sum(a * a for a in p)
    return tuple(h) + (c,)


def voronoi_cells(sites: Sequence[Sequence], bounding_box: Polytope) -> list[Polytope]:
    pts = [point(s) for s in sites]
    if len(set(pts)) != len(pts):
        raise GeometryError("duplicate sites")
    for s in pts:
        if not bounding_box.contains(s, strict=True):
            raise GeometryError("site outside the bounding box")
    d = bounding_box.dim
    cells = []
    for i, p in enumerate(pts):
        rows = [tuple(Fraction(x) for x in f) for f in bounding_box.facets]
        rows += [bisector(p, q) for j, q in enumerate(pts) if j != i]
        cell = from_halfspaces(rows, d)
        if cell is None:
            raise DegenerateError("empty Voronoi cell")
        cells.append(cell)
    return cells


def shared_face_rank(a: Polytope, b: Polytope) -> int:
    """Affine rank of a & b (-1 when disjoint)."""
    verts = halfspace_vertices(list(a.facets) + list(b.facets), a.dim)
    return affine_rank(verts) if verts else -1


def quartic_hyperplane(m1, t1, t2, m2, orient_positive_at_extrema: bool = False) -> Hyperplane:
    """Hyperplane h.x = theta in R^4 whose trace f(t) = h.M(t) - theta on the
    moment curve vanishes at t1, t2 and is stationary at m1, m2.

    Normalized with leading (t^4) coefficient 1; optionally flipped so that
    f(m1) > 0.
    """
    m1, t1, t2, m2 = map(frac, (m1, t1, t2, m2))
    if not m1 < t1 < t2 < m2:
        raise GeometryError("need m1 < t1 < t2 < m2")
    rows = [
        [t1, t1 ** 2, t1 ** 3, t1 ** 4, -1],
        [t2, t2 ** 2, t2 ** 3, t2 ** 4, -1],
        [1, 2 * m1, 3 * m1 ** 2, 4 * m1 ** 3, 0],
        [1, 2 * m2, 3 * m2 ** 2, 4 * m2 ** 3, 0],
    ]
    v = nullspace_vector(rows)
    lead = next((x for x in reversed(v[:4]) if x != 0), None)
    if lead is None:
        raise GeometryError("degenerate quartic system")
    v = [x / lead for x in v]
    hp = Hyperplane(tuple(v[:4]), v[4])
    if orient_positive_at_extrema and hp.value(moment_point(m1, 4)) < 0:
        hp = hp.flipped()
    return hp


def poly_value(hp: Hyperplane, t) -> Fraction:
    return hp.value(moment_point(t, len(hp.normal)))


def poly_derivative(hp: Hyperplane, t) -> Fraction:
    t = frac(t)
    return sum((k + 1) * frac(c) * t ** k for k, c in enumerate(hp.normal))


@dataclass(frozen=True)
class AffineMap:
    scale: Fraction
    shift: tuple

    def apply_point(self, p: Sequence) -> Point:
        return tuple(self.scale * frac(x) + s for x, s in zip(p, self.shift))

    def apply(self, poly: Polytope) -> Polytope:
        return poly.affine(self.scale, self.shift)


def inner_cube(target: Polytope) -> tuple[Point, Fraction]:
    """Center and half-width of an axis cube strictly inside target."""
    c = target.centroid()
    d = target.dim
    best = None
    for f in target.facets:
        gap = f[d] - sum(f[i] * c[i] for i in range(d))
        l1 = sum(abs(x) for x in f[:d])
        r = gap / l1
        best = r if best is None else min(best, r)
    return c, best / 2


def fit_map(sources: Sequence[Polytope], target: Polytope) -> AffineMap:
    """Scaling + translation taking the union of sources strictly inside target."""
    d = target.dim
    lo = [min(v[i] for p in sources for v in p.vertices) for i in range(d)]
    hi = [max(v[i] for p in sources for v in p.vertices) for i in range(d)]
    mid = [(a + b) / 2 for a, b in zip(lo, hi)]
    half = max((b - a) / 2 for a, b in zip(lo, hi))
    c, r = inner_cube(target)
    scale = r / half
    shift = tuple(ci - scale * mi for ci, mi in zip(c, mid))
    return AffineMap(scale, shift)


def affine_fit_into(p: Polytope, target: Polytope) -> tuple[AffineMap, Polytope]:
    if p.dim != target.dim:
        raise GeometryError("dimension mismatch")
    mp = fit_map([p], target)
    return mp, mp.apply(p)


__all__ = [
    "Polytope", "Hyperplane", "AffineMap", "GeometryError", "DegenerateError",
    "convex_hull", "from_halfspaces", "halfspace_vertices", "intersect", "interval", "box",
    "rcc8_relation", "rcc8_relation_dd", "rcc8_relation_lp", "int_rank", "erode", "disc_polytope", "simplex_around",
    "moment_point", "voronoi_cells", "shared_face_rank", "quartic_hyperplane",
    "affine_fit_into", "fit_map", "max_slack", "common_interior_point", "extreme_rays",
    "rank", "affine_rank", "frac", "point", "fmt_frac", "bisector", "poly_value", "poly_derivative",
]
