"""Named network families (lower-bound witnesses) and the two reductions.

Every generator returns a complete network: pairs that the construction
leaves open are either filled explicitly (DC, EC or DR, as each family
prescribes) or pinned down by path consistency.
"""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from typing import Callable

from .algebra import ALL_MASK, DC, EC, EQ, NTPP, NTPPI, PO, TPP, TPPI, converse_mask, parse_mask
from .consistency import path_consistency
from .network import Network, NetworkError

DR = DC | EC
PP = TPP | NTPP
PPI = TPPI | NTPPI


class CorpusError(NetworkError):
    pass


def _closed(vars, cons, fill: int | None = None) -> Network:
    """Build, optionally fill unconstrained pairs, then tighten by path consistency."""
    n = Network.build(vars, cons)
    if fill is not None:
        rows = n.matrix()
        for i, j in n.pairs():
            if rows[i][j] == ALL_MASK:
                rows[i][j] = fill
                rows[j][i] = converse_mask(fill)
        n = n.with_masks(rows)
    closed, trace = path_consistency(n, record=False)
    if not trace.consistent:
        raise CorpusError("generated network is inconsistent")
    return closed


# -- two-dimensional counterexample and its higher-dimensional variants ----------

def _theta2d_constraints():
    return [
        ("a", EC, "b"),
        ("x", TPP, "a"), ("y", TPP, "a"), ("u", TPP, "b"), ("v", TPP, "b"),
        ("x", DC, "y"), ("u", DC, "v"),
        ("x", EC, "u"), ("x", EC, "v"), ("y", EC, "u"), ("y", EC, "v"),
    ]


THETA2D_VARS = ["a", "b", "x", "y", "u", "v"]


def example1_theta2d() -> Network:
    """Two touching regions, each with two tangential parts that pairwise touch
    across; no convex solution in the plane."""
    return _closed(THETA2D_VARS, _theta2d_constraints())


def theta3d() -> Network:
    cons = _theta2d_constraints() + [
        ("c", EC, "d"),
        ("x", TPP, "c"), ("y", TPP, "c"), ("u", TPP, "d"), ("v", TPP, "d"),
        ("a", PO, "c"), ("a", PO, "d"), ("b", PO, "c"), ("b", PO, "d"),
    ]
    return _closed(THETA2D_VARS + ["c", "d"], cons)


def theta_nd(n: int) -> Network:
    """The planar counterexample extended by a triple e_i, f_i, g_i per extra
    dimension (i = 0..n-3); 3n variables."""
    if n < 4:
        raise CorpusError("theta_nd needs n >= 4")
    cons = _theta2d_constraints()
    names = list(THETA2D_VARS)
    for i in range(n - 2):
        e, f, g = f"e{i}", f"f{i}", f"g{i}"
        names += [e, f, g]
        cons += [
            (e, TPP, "a"), (e, NTPP, f), ("a", TPP, f), (g, EC, f), (g, EC, "a"),
            ("u", TPP, g), ("v", TPP, g), (e, EC, "b"), (g, TPP, "b"),
        ]
        if i >= 1:
            cons += [(e, EC, f"g{i - 1}"), (g, TPP, f"g{i - 1}")]
    return _closed(names, cons)


# -- K_{3,3} witnesses ------------------------------------------------------------

K33_LEFT = ("a", "b", "c")
K33_RIGHT = ("u", "v", "w")


def k33_po(variant: str = "dr") -> Network:
    """Six regions plus one connector r_xy overlapping x and y for each edge of
    K_{3,3}; every other pair is DR (or DC / EC in the RCC8 variants)."""
    fill = {"dr": DR, "dc": DC, "ec": EC}.get(variant)
    if fill is None:
        raise CorpusError(f"unknown k33_po variant {variant!r} (dr, dc, ec)")
    names = list(K33_LEFT + K33_RIGHT)
    cons = []
    for x in K33_LEFT:
        for y in K33_RIGHT:
            r = f"r_{x}{y}"
            names.append(r)
            cons += [(r, PO, x), (r, PO, y)]
    return _closed(names, cons, fill=fill)


def k33_ec() -> Network:
    """a, b, c each touch u, v, w; all other pairs are disconnected."""
    cons = [(x, EC, y) for x in K33_LEFT for y in K33_RIGHT]
    return _closed(list(K33_LEFT + K33_RIGHT), cons, fill=DC)


# -- Radon networks -----------------------------------------------------------------

RADON_WARN = 8


def radon(n: int) -> Network:
    """RCC5 network of n+2 pairwise DR regions a_i and one b_I per nonempty
    subset I: a_i PP b_I for i in I, DR otherwise; b_I, b_J related by
    inclusion, overlap or disjointness of I and J."""
    if n < 1:
        raise CorpusError("radon needs n >= 1")
    if n > RADON_WARN:
        warnings.warn(f"radon({n}) has {2 ** (n + 2) + n + 1} variables", stacklevel=2)
    idx = range(1, n + 3)
    subsets = [frozenset(c) for k in range(1, n + 3) for c in itertools.combinations(idx, k)]

    def bname(s):
        return "b_" + "".join(str(i) if i < 10 else f"({i})" for i in sorted(s))

    names = [f"a_{i}" for i in idx] + [bname(s) for s in subsets]
    cons = [(f"a_{i}", DR, f"a_{j}") for i, j in itertools.combinations(idx, 2)]
    for s in subsets:
        for i in idx:
            cons.append((f"a_{i}", PP if i in s else DR, bname(s)))
    for s, t in itertools.combinations(subsets, 2):
        if s < t:
            r = PP
        elif s > t:
            r = PPI
        elif s & t:
            r = PO
        else:
            r = DR
        cons.append((bname(s), r, bname(t)))
    return _closed(names, cons)


# -- planar / 3D lower-bound witnesses ------------------------------------------------

def ec_tpp_square(n: int = 5) -> Network:
    """Two touching regions a, b with n index groups z,x,y (inside a) and
    w,u,v (inside b) whose parts touch across groups."""
    if n < 2:
        raise CorpusError("ec_tpp_square needs n >= 2")
    ids = range(1, n + 1)
    names = ["a", "b"]
    for i in ids:
        names += [f"{p}{i}" for p in "zxywuv"]
    cons = [("a", EC, "b")]
    for i in ids:
        z, x, y, w, u, v = (f"{p}{i}" for p in "zxywuv")
        cons += [(w, EC, "a"), (u, EC, "a"), (v, EC, "a"),
                 (z, TPP, "a"), (x, TPP, "a"), (y, TPP, "a"),
                 (w, TPP, "b"), (u, TPP, "b"), (v, TPP, "b"),
                 (z, EC, "b"), (x, EC, "b"), (y, EC, "b")]
        cons += [(z, DC, w), (z, DC, u), (z, DC, v), (x, TPP, z), (y, TPP, z),
                 (w, DC, x), (w, DC, y), (u, TPP, w), (v, TPP, w),
                 (x, EC, y), (x, DC, u), (x, DC, v), (y, DC, u), (y, DC, v), (u, EC, v)]
        for j in ids:
            if i == j:
                continue
            zj, xj, yj, wj, uj, vj = (f"{p}{j}" for p in "zxywuv")
            cons += [(z, DC, zj), (z, DC, xj), (z, DC, yj),
                     (z, EC, wj), (z, EC, uj), (z, EC, vj),
                     (w, DC, wj), (w, DC, uj), (w, DC, vj),
                     (w, EC, xj), (w, EC, yj),
                     (x, EC, uj), (x, EC, vj), (x, DC, xj), (x, DC, yj),
                     (y, EC, uj), (y, EC, vj), (y, DC, yj),
                     (u, DC, uj), (u, DC, vj), (v, DC, vj)]
    return _closed(names, cons)


def tpp_ntpp_chain() -> Network:
    cons = [("a1", TPP, "a2"), ("a1", TPP, "a3"), ("a1", NTPP, "a4"),
            ("a2", TPP, "a3"), ("a2", TPP, "a4"), ("a3", TPP, "a4")]
    return _closed(["a1", "a2", "a3", "a4"], cons)


def n3_1() -> Network:
    return _closed(["a", "b", "c"], [("a", EC, "b"), ("b", EC, "c"), ("a", EC, "c")])


def n3_2() -> Network:
    return _closed(["a", "b", "c"], [("a", PO, "b"), ("b", EC, "c"), ("a", EC, "c")])


def po_pp_hexagon(variant: str = "tpp") -> Network:
    """Three pairwise overlapping regions a, b, c and three pairwise
    overlapping d, e, f, each of the latter inside exactly two of the former."""
    part = {"pp": PP, "tpp": TPP, "ntpp": NTPP}.get(variant)
    if part is None:
        raise CorpusError(f"unknown po_pp_hexagon variant {variant!r} (pp, tpp, ntpp)")
    cons = [(p, PO, q) for p, q in itertools.combinations("abc", 2)]
    cons += [(p, PO, q) for p, q in itertools.combinations("def", 2)]
    inside = {"d": "ab", "e": "ac", "f": "bc"}
    for s, outer in inside.items():
        for t in "abc":
            cons.append((s, part if t in outer else PO, t))
    return _closed(list("abcdef"), cons)


# -- registry -----------------------------------------------------------------------

@dataclass(frozen=True)
class Family:
    name: str
    build: Callable[..., Network]
    params: str


FAMILIES: dict[str, Family] = {
    "example1_theta2d": Family("example1_theta2d", lambda: example1_theta2d(), "none"),
    "theta3d": Family("theta3d", lambda: theta3d(), "none"),
    "theta_nd": Family("theta_nd", lambda n=4: theta_nd(n), "n >= 4 (default 4)"),
    "k33_po": Family("k33_po", lambda variant="dr": k33_po(variant), "variant in dr, dc, ec (default dr)"),
    "k33_ec": Family("k33_ec", lambda: k33_ec(), "none"),
    "radon": Family("radon", lambda n=1: radon(n), f"n >= 1 (default 1; warns above {RADON_WARN})"),
    "ec_tpp_square": Family("ec_tpp_square", lambda n=5: ec_tpp_square(n), "n >= 2 (default 5)"),
    "tpp_ntpp_chain": Family("tpp_ntpp_chain", lambda: tpp_ntpp_chain(), "none"),
    "n3_1": Family("n3_1", lambda: n3_1(), "none"),
    "n3_2": Family("n3_2", lambda: n3_2(), "none"),
    "po_pp_hexagon": Family("po_pp_hexagon", lambda variant="tpp": po_pp_hexagon(variant),
                            "variant in pp, tpp, ntpp (default tpp)"),
}


def gen(family: str, n: int | None = None, variant: str | None = None) -> Network:
    """Instance of a named family; n and variant are passed where the family takes them."""
    fam = FAMILIES.get(family)
    if fam is None:
        raise CorpusError(f"unknown family {family!r}")
    kwargs = {}
    if n is not None:
        if family not in ("theta_nd", "radon", "ec_tpp_square"):
            raise CorpusError(f"family {family} takes no n")
        kwargs["n"] = n
    if variant is not None:
        if family not in ("k33_po", "po_pp_hexagon"):
            raise CorpusError(f"family {family} takes no variant")
        kwargs["variant"] = variant
    return fam.build(**kwargs)


def manifest() -> list[dict[str, str]]:
    return [{"family": f.name, "params": f.params} for f in FAMILIES.values()]


# -- reductions -----------------------------------------------------------------------

def _fresh(taken: set[str], stem: str) -> str:
    name = stem
    k = 0
    while name in taken:
        k += 1
        name = f"{stem}_{k}"
    taken.add(name)
    return name


def _triples(n: Network):
    for i, j in n.pairs():
        yield n.vars[i], n.mask(i, j), n.vars[j]


def transform_po_elimination(n: Network) -> Network:
    """Replace every PO pair (p, q) by fresh x, y, z with x TPP p, x EC q,
    y TPP q, y EC p, z TPP p, z TPP q; the pair itself becomes unconstrained.
    The output only uses EC, TPP and TPPi."""
    if not n.is_atomic or n.used_relations() & ~(EC | PO | TPP | TPPI):
        raise CorpusError("PO elimination needs an atomic network over {EC, PO, TPP, TPPi}")
    taken = set(n.vars)
    names = list(n.vars)
    cons = []
    for p, r, q in _triples(n):
        if r != PO:
            cons.append((p, r, q))
            continue
        x, y, z = (_fresh(taken, f"{s}_{p}_{q}") for s in "xyz")
        names += [x, y, z]
        cons += [(x, TPP, p), (x, EC, q), (y, TPP, q), (y, EC, p), (z, TPP, p), (z, TPP, q)]
    return Network.build(names, cons)


def transform_hardness_lift(n: Network) -> Network:
    """Add touching a, b and, for each v, parts v1 of a and v2 of b inside v;
    touching pairs u, v get u1 EC v1 and u2 EC v2."""
    for i, j in n.pairs():
        m = n.mask(i, j)
        if m != ALL_MASK and m != EC and m & ~PP and m & ~PPI:
            raise CorpusError("hardness lift needs a network over {PP, PPi, EC}")
    taken = set(n.vars)
    a = _fresh(taken, "a")
    b = _fresh(taken, "b")
    names = list(n.vars) + [a, b]
    cons = list(_triples(n)) + [(a, EC, b)]
    one, two = {}, {}
    for v in n.vars:
        one[v] = _fresh(taken, f"{v}1")
        two[v] = _fresh(taken, f"{v}2")
        names += [one[v], two[v]]
        cons += [(one[v], PP, v), (two[v], PP, v), (one[v], PP, a), (two[v], PP, b)]
    for u, r, v in _triples(n):
        if r == EC:
            cons += [(one[u], EC, one[v]), (two[u], EC, two[v])]
    return Network.build(names, cons)


def uses_only(n: Network, allowed: int) -> bool:
    """Every constrained (non-universal) pair lies within allowed."""
    for i, j in n.pairs():
        m = n.mask(i, j)
        if m != ALL_MASK and m & ~allowed:
            return False
    return True


__all__ = [
    "CorpusError", "FAMILIES", "Family", "gen", "manifest", "example1_theta2d", "theta3d", "theta_nd",
    "k33_po", "k33_ec", "radon", "ec_tpp_square", "tpp_ntpp_chain", "n3_1", "n3_2", "po_pp_hexagon",
    "transform_po_elimination", "transform_hardness_lift", "uses_only", "DR", "PP", "PPI",
]
