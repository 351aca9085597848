"""Independent reference computations used to freeze expected values."""
from __future__ import annotations

import itertools
from fractions import Fraction

# RCC8 base relations in bit order
NAMES = ("DC", "EC", "PO", "TPP", "NTPP", "TPPi", "NTPPi", "EQ")
BIT = {name: 1 << i for i, name in enumerate(NAMES)}


def _intervals(k):
    return [(a, b) for a in range(k) for b in range(a + 1, k)]


def _box_rcc8(x, y) -> str:
    """RCC8 relation of two axis boxes given as tuples of (lo, hi) intervals."""
    inter = [(max(a[0], b[0]), min(a[1], b[1])) for a, b in zip(x, y)]
    if any(lo > hi for lo, hi in inter):
        return "DC"
    if any(lo == hi for lo, hi in inter):
        return "EC"
    if x == y:
        return "EQ"

    def inside(p, q):
        return all(q[0] <= a[0] and a[1] <= q[1] for a, q in zip(p, q))

    def strictly(p, q):
        return all(q[0] < a[0] and a[1] < q[1] for a, q in zip(p, q))

    if inside(x, y):
        return "NTPP" if strictly(x, y) else "TPP"
    if inside(y, x):
        return "NTPPi" if strictly(y, x) else "TPPi"
    return "PO"


def _endpoint_order(a, b):
    """Qualitative signature of two intervals: comparisons of all endpoints."""
    return tuple((x > y) - (x < y) for x in a for y in b)


def box_composition_table(dim: int = 2, k: int = 8) -> dict[tuple[str, str], int]:
    """r o s as realized by axis boxes: every x-z relation over boxes x, y, z
    with x r y and y s z.  Per axis only the endpoint order matters, so one
    representative interval triple per order pattern is kept and boxes are
    products of representatives."""
    ivs = _intervals(k)
    reps = {}
    for a in ivs:
        for b in ivs:
            for c in ivs:
                key = (_endpoint_order(a, b), _endpoint_order(b, c), _endpoint_order(a, c))
                reps.setdefault(key, (a, b, c))
    triples = list(reps.values())
    table = {(r, s): 0 for r in NAMES for s in NAMES}
    for combo in itertools.product(triples, repeat=dim):
        x = tuple(t[0] for t in combo)
        y = tuple(t[1] for t in combo)
        z = tuple(t[2] for t in combo)
        table[(_box_rcc8(x, y), _box_rcc8(y, z))] |= BIT[_box_rcc8(x, z)]
    return table


def brute_force_atomic_count(m: int, allowed: int, compose, converse) -> int:
    """Path-consistent atomic networks over allowed (closed under converse),
    counted up to isomorphism by trying every labeling and permutation."""
    pairs = [(i, j) for i in range(m) for j in range(i + 1, m)]
    bases = [1 << b for b in range(7) if allowed >> b & 1]
    seen = set()
    for labels in itertools.product(bases, repeat=len(pairs)):
        mat = [[BIT["EQ"] if i == j else 0 for j in range(m)] for i in range(m)]
        for (i, j), b in zip(pairs, labels):
            mat[i][j] = b
            mat[j][i] = converse(b)
        ok = all(mat[i][k] & compose(mat[i][j], mat[j][k])
                 for i in range(m) for j in range(m) for k in range(m)
                 if len({i, j, k}) == 3)
        if not ok:
            continue
        key = min(tuple(mat[p[i]][p[j]] for i, j in pairs) for p in itertools.permutations(range(m)))
        seen.add(key)
    return len(seen)


def interval_relation_1d(a, b) -> str:
    """RCC8 relation of two closed intervals."""
    return _box_rcc8((a,), (b,))


def frac_points(values):
    return [Fraction(v) for v in values]


CONVERSE_NAME = {"DC": "DC", "EC": "EC", "PO": "PO", "TPP": "TPPi", "NTPP": "NTPPi",
                 "TPPi": "TPP", "NTPPi": "NTPP", "EQ": "EQ"}


def table_functions(table):
    """(compose, converse) on single-bit masks from a name-keyed table."""
    by_bit = {BIT[n]: n for n in NAMES}

    def compose(a, b):
        return table[(by_bit[a], by_bit[b])]

    def converse(a):
        return BIT[CONVERSE_NAME[by_bit[a]]]

    return compose, converse
