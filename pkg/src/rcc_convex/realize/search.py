"""Search-based realizer for small networks: products of intervals (boxes).

Along each axis the projections of two boxes stand in one of the 13 interval
relations; the RCC8 relation of the boxes is a function of that tuple.  The
search picks a tuple per pair, keeps every axis path-consistent in the
interval algebra (complete for atomic interval networks) and finally turns
each axis into concrete endpoints.
"""
from __future__ import annotations

import random
from functools import lru_cache

from ..algebra import DC, EC, EQ, NTPP, NTPPI, PO, TPP, TPPI
from ..geometry import box
from ..network import Network, NetworkError
from .realization import Realization, is_valid

# interval relations, converse pairs adjacent to each other
ALLEN = ("b", "bi", "m", "mi", "o", "oi", "s", "si", "d", "di", "f", "fi", "e")
A_INDEX = {name: i for i, name in enumerate(ALLEN)}
A_ALL = (1 << len(ALLEN)) - 1


def allen_of(x: tuple, y: tuple) -> int:
    """Index of the interval relation between closed intervals x and y."""
    (a1, a2), (b1, b2) = x, y
    if a2 < b1:
        return A_INDEX["b"]
    if b2 < a1:
        return A_INDEX["bi"]
    if a2 == b1:
        return A_INDEX["m"]
    if b2 == a1:
        return A_INDEX["mi"]
    if a1 == b1 and a2 == b2:
        return A_INDEX["e"]
    if a1 == b1:
        return A_INDEX["s"] if a2 < b2 else A_INDEX["si"]
    if a2 == b2:
        return A_INDEX["f"] if a1 > b1 else A_INDEX["fi"]
    if b1 < a1 and a2 < b2:
        return A_INDEX["d"]
    if a1 < b1 and b2 < a2:
        return A_INDEX["di"]
    return A_INDEX["o"] if a1 < b1 else A_INDEX["oi"]


@lru_cache(maxsize=None)
def allen_tables():
    """Composition and converse, derived by enumerating small integer intervals."""
    ivs = [(a, b) for a in range(7) for b in range(a + 1, 7)]
    comp = [[0] * 13 for _ in range(13)]
    conv = [0] * 13
    for x in ivs:
        for y in ivs:
            r = allen_of(x, y)
            conv[r] = allen_of(y, x)
            for z in ivs:
                comp[r][allen_of(y, z)] |= 1 << allen_of(x, z)
    return tuple(tuple(r) for r in comp), tuple(conv)


def _compose(r: int, s: int) -> int:
    comp, _ = allen_tables()
    out = 0
    for i in range(13):
        if r >> i & 1:
            row = comp[i]
            for j in range(13):
                if s >> j & 1:
                    out |= row[j]
    return out


def _conv(mask: int) -> int:
    _, conv = allen_tables()
    out = 0
    for i in range(13):
        if mask >> i & 1:
            out |= 1 << conv[i]
    return out


_GAP = {A_INDEX["b"], A_INDEX["bi"]}
_TOUCH = {A_INDEX["m"], A_INDEX["mi"]}
_INSIDE = {A_INDEX[x] for x in ("s", "d", "f", "e")}
_AROUND = {A_INDEX[x] for x in ("si", "di", "fi", "e")}


def box_relation(axes: tuple[int, ...]) -> int:
    """RCC8 relation (mask) of two boxes with the given per-axis relations."""
    if any(r in _GAP for r in axes):
        return DC
    if any(r in _TOUCH for r in axes):
        return EC
    e = A_INDEX["e"]
    if all(r == e for r in axes):
        return EQ
    if all(r in _INSIDE for r in axes):
        return NTPP if all(r == A_INDEX["d"] for r in axes) else TPP
    if all(r in _AROUND for r in axes):
        return NTPPI if all(r == A_INDEX["di"] for r in axes) else TPPI
    return PO


def _set(*names: str) -> int:
    out = 0
    for x in names:
        out |= 1 << A_INDEX[x]
    return out


_OVERLAP = _set("o", "oi", "s", "si", "d", "di", "f", "fi", "e")
_IN = _set("s", "d", "f", "e")


@lru_cache(maxsize=None)
def box_cases(rel: int, dim: int) -> tuple[tuple[int, ...], ...]:
    """Products of per-axis interval masks whose union is exactly the set of
    axis tuples giving boxes in relation ``rel`` (cases may overlap)."""
    def one(k, mk, rest):
        return tuple(mk if a == k else rest for a in range(dim))

    if rel == DC:
        return tuple(one(k, _set("b", "bi"), A_ALL) for k in range(dim))
    if rel == EC:
        return tuple(one(k, _set("m", "mi"), A_ALL & ~_set("b", "bi")) for k in range(dim))
    if rel == EQ:
        return (tuple(_set("e") for _ in range(dim)),)
    if rel == NTPP:
        return (tuple(_set("d") for _ in range(dim)),)
    if rel == TPP:
        out = [one(k, _set("s", "f"), _IN) for k in range(dim)]
        for k in range(dim):
            for l in range(dim):
                if k != l:
                    out.append(tuple(_set("e") if a == k else _set("d") if a == l else _IN for a in range(dim)))
        return tuple(out)
    if rel in (TPPI, NTPPI):
        return tuple(tuple(_conv(x) for x in case) for case in box_cases(rel >> 2, dim))
    if rel == PO:
        out = [one(k, _set("o", "oi"), _OVERLAP) for k in range(dim)]
        for k in range(dim):
            for l in range(dim):
                if k != l:
                    out.append(tuple(_set("si", "di", "fi") if a == k else _set("s", "d", "f") if a == l
                                     else _OVERLAP for a in range(dim)))
        return tuple(out)
    raise ValueError("not a base relation")


class _Budget(Exception):
    pass


def _close_axis(rows, start=None):
    """Path consistency on one axis matrix of interval masks (in place)."""
    m = len(rows)
    if start is None:
        start = [(i, j) for i in range(m) for j in range(i + 1, m)]
    queue = list(start)
    queued = set(queue)
    while queue:
        i, j = queue.pop()
        queued.discard((i, j))
        rij = rows[i][j]
        for k in range(m):
            if k == i or k == j:
                continue
            new = rows[i][k] & _compose(rij, rows[j][k])
            if new != rows[i][k]:
                if not new:
                    return False
                rows[i][k] = new
                rows[k][i] = _conv(new)
                if (i, k) not in queued:
                    queued.add((i, k))
                    queue.append((i, k))
            new = rows[k][j] & _compose(rows[k][i], rij)
            if new != rows[k][j]:
                if not new:
                    return False
                rows[k][j] = new
                rows[j][k] = _conv(new)
                if (k, j) not in queued:
                    queued.add((k, j))
                    queue.append((k, j))
    return True


# preferred atomic choices: generic relations before ones sharing endpoints
_PREFER = [A_INDEX[x] for x in ("b", "bi", "o", "oi", "d", "di", "m", "mi", "s", "si", "f", "fi", "e")]


def _atomic_axis(rows, nodes, budget):
    """Backtracking refinement of one axis to an atomic path-consistent network."""
    nodes[0] += 1
    if nodes[0] > budget:
        raise _Budget
    m = len(rows)
    best = None
    for i in range(m):
        for j in range(i + 1, m):
            x = rows[i][j]
            if x & (x - 1):
                c = bin(x).count("1")
                if best is None or c < best[0]:
                    best = (c, i, j)
    if best is None:
        return rows
    _, i, j = best
    for r in _PREFER:
        if rows[i][j] >> r & 1:
            trial = [list(x) for x in rows]
            trial[i][j] = 1 << r
            trial[j][i] = _conv(1 << r)
            if _close_axis(trial, [(i, j)]):
                got = _atomic_axis(trial, nodes, budget)
                if got is not None:
                    return got
    return None
def _endpoints(rows) -> list[tuple[int, int]]:
    """Integer intervals realizing an atomic path-consistent axis network."""
    m = len(rows)
    # endpoint k of interval i is node 2i + k; relations between endpoints
    # read off a witness of the pair's interval relation
    witness = {}
    ivs = [(a, b) for a in range(5) for b in range(a + 1, 5)]
    for x in ivs:
        for y in ivs:
            witness.setdefault(allen_of(x, y), (x, y))
    less = [[False] * (2 * m) for _ in range(2 * m)]
    equal = [[p == q for q in range(2 * m)] for p in range(2 * m)]
    for i in range(m):
        less[2 * i][2 * i + 1] = True
        for j in range(m):
            if i == j:
                continue
            r = rows[i][j].bit_length() - 1
            x, y = witness[r]
            for a in range(2):
                for b in range(2):
                    if x[a] < y[b]:
                        less[2 * i + a][2 * j + b] = True
                    elif x[a] == y[b]:
                        equal[2 * i + a][2 * j + b] = True
    rank = []
    for p in range(2 * m):
        below = {min(q2 for q2 in range(2 * m) if equal[q][q2]) for q in range(2 * m) if less[q][p]}
        rank.append(len(below))
    # ranks from "number of smaller classes" form a valid strict order only
    # if the relation is a total preorder; recompute by longest chains
    order = sorted(range(2 * m), key=lambda p: rank[p])
    value = {}
    for p in order:
        v = 0
        for q in range(2 * m):
            if less[q][p]:
                v = max(v, value.get(q, 0) + 1)
        for q in range(2 * m):
            if equal[q][p] and q in value:
                v = max(v, value[q])
        value[p] = v
        for q in range(2 * m):
            if equal[q][p]:
                value[q] = v
    return [(value[2 * i], value[2 * i + 1]) for i in range(m)]


def realize_boxes(n: Network, dim: int, seed: int = 0, node_budget: int = 20000,
                  weak: bool = False) -> Realization | None:
    """Boxes in R^dim realizing n (weakly, if asked), or None within budget.

    Each pair first picks a case (a product of per-axis masks); once every
    pair has one, the axes are independent and each is refined to an atomic
    interval network on its own."""
    from ..algebra import members, weaken_mask
    if not n.is_atomic:
        raise NetworkError("box search needs an atomic network")
    m = len(n)
    vs = n.vars
    if m == 0:
        return Realization(dim, {})
    rng = random.Random(seed)
    cases = {}
    for i, j in n.pairs():
        mask = weaken_mask(n.mask(i, j)) if weak else n.mask(i, j)
        opts = [c for b in members(mask) for c in box_cases(b.bit, dim)]
        if seed:
            rng.shuffle(opts)
        cases[(i, j)] = opts
    start = [[[1 << A_INDEX["e"] if i == j else A_ALL for j in range(m)] for i in range(m)]
             for _ in range(dim)]
    nodes = [0]

    def fits(axes, pair, case):
        i, j = pair
        return all(axes[k][i][j] & case[k] for k in range(dim))

    def go(axes, todo):
        nodes[0] += 1
        if nodes[0] > node_budget:
            raise _Budget
        if not todo:
            out = []
            for ax in axes:
                got = _atomic_axis([list(r) for r in ax], nodes, node_budget)
                if got is None:
                    return None
                out.append(got)
            return out
        best = None
        for pair in todo:
            live = [c for c in cases[pair] if fits(axes, pair, c)]
            if not live:
                return None
            if best is None or len(live) < len(best[1]):
                best = (pair, live)
        pair, live = best
        rest = [p for p in todo if p != pair]
        i, j = pair
        for case in live:
            trial = [[list(r) for r in ax] for ax in axes]
            ok = True
            for k in range(dim):
                new = trial[k][i][j] & case[k]
                if new != trial[k][i][j]:
                    trial[k][i][j] = new
                    trial[k][j][i] = _conv(new)
                    if not _close_axis(trial[k], [(i, j)]):
                        ok = False
                        break
            if ok:
                got = go(trial, rest)
                if got is not None:
                    return got
        return None

    try:
        got = go(start, list(cases))
    except _Budget:
        return None
    if got is None:
        return None
    per_axis = [_endpoints(ax) for ax in got]
    regions = {}
    for i, v in enumerate(vs):
        lo = [per_axis[k][i][0] for k in range(dim)]
        hi = [per_axis[k][i][1] for k in range(dim)]
        regions[v] = box(lo, hi)
    r = Realization(dim, regions, weak=weak)
    return r if is_valid(n, r) else None
