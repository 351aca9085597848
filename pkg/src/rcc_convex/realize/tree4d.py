"""Four-dimensional construction for networks over {EC, DC, TPP, TPPi}.

Regions are arranged in an ordered binary containment tree.  Every node gets
a parameter t on the 4D moment curve, chosen so that the descendants of a
left child precede it and those of a right child follow its sibling.  Each
touching pair of leaves (a, b) gets a witness point q_ab = p_xy + lam * h_ab,
where x, y are the children of their lowest common ancestor, p_xy is the
midpoint of M(t_x), M(t_y), and h_ab is the normal of the hyperplane through
M(t_x), M(t_y) whose trace on the curve is stationary at t_a and t_b.  Leaves
are hulls of a small simplex around M(t_a) and their witness points;
internal nodes are hulls of their leaves.

Before building, the tree is normalized with auxiliary nodes (prefix
``__aux``): a witness leaf on each side of every EC pair, a universe node, a
group z3 = {z1, z2} touching everything, and binarization fillers.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..algebra import DC, EC, EQ, NTPP, NTPPI, TPP, TPPI
from ..geometry import (
    DegenerateError, bisector, convex_hull, moment_point, quartic_hyperplane, simplex_around,
)
from ..network import Network, NetworkError
from .intervals import containment_forest
from .realization import Realization, RealizationError, is_valid

AUX = "__aux"
DEFAULT_RETRIES = 12
ROOT = AUX + "root"


@dataclass
class TreeConstructionState:
    """Normalized tree plus the numbers chosen for one attempt."""
    children: dict[str, list[str]]
    parent: dict[str, str | None]
    leaf_pairs: list[tuple[str, str]]        # touching leaves
    t: dict[str, Fraction] = field(default_factory=dict)
    sigma: dict[str, Fraction] = field(default_factory=dict)      # delta_x = eps_x = sigma_x * width
    lambda_star: Fraction = Fraction(0)
    anchors: dict[tuple[str, str], tuple] = field(default_factory=dict)   # q_ab
    hyperplanes: dict[tuple[str, str], object] = field(default_factory=dict)
    midpoints: dict[tuple[str, str], tuple] = field(default_factory=dict)

    def ancestors(self, v: str) -> list[str]:
        """Strict ancestors, nearest first, excluding the root."""
        out = []
        p = self.parent[v]
        while p is not None and p != ROOT:
            out.append(p)
            p = self.parent[p]
        return out

    def chain(self, v: str) -> list[str]:
        return [v] + self.ancestors(v)

    def sibling(self, v: str) -> str:
        a, b = self.children[self.parent[v]]
        return b if a == v else a

    def leaves_under(self, v: str) -> list[str]:
        kids = self.children.get(v)
        if not kids:
            return [v]
        return [leaf for k in kids for leaf in self.leaves_under(k)]


# -- normalization ------------------------------------------------------------

def normalize_tree(n: Network) -> TreeConstructionState:
    vs = n.vars
    parent: dict[str, str | None] = dict(containment_forest(n, TPP))
    counter = [0]

    def fresh(tag: str) -> str:
        counter[0] += 1
        return f"{AUX}{tag}{counter[0]}"

    leaf_pairs: list[tuple[str, str]] = []
    # witness leaves for every EC pair
    for i, j in n.pairs():
        if n.mask(i, j) == EC:
            a, b = vs[i], vs[j]
            wa, wb = fresh("w"), fresh("w")
            parent[wa], parent[wb] = a, b
            leaf_pairs.append((wa, wb))
    universe, z1, z2, z3 = fresh("U"), fresh("z"), fresh("z"), fresh("z")
    for v in list(parent):
        if parent[v] is None:
            parent[v] = universe
    parent[universe] = ROOT
    parent[z3] = ROOT
    parent[z1] = z3
    parent[z2] = z3
    parent[ROOT] = None

    children: dict[str, list[str]] = {}
    for v, p in parent.items():
        if p is not None:
            children.setdefault(p, []).append(v)
    # binarize: fillers for only children, chains of helpers for wide nodes
    work = list(children)
    while work:
        v = work.pop()
        kids = children[v]
        if len(kids) == 1:
            f = fresh("f")
            parent[f] = v
            kids.append(f)
        while len(kids) > 2:
            h = fresh("h")
            rest = kids[1:]
            children[h] = rest
            for k in rest:
                parent[k] = h
            parent[h] = v
            children[v] = kids = [kids[0], h]
            work.append(h)
            break
    for v in parent:
        children.setdefault(v, [])
    st = TreeConstructionState(children={k: v for k, v in children.items() if v}, parent=parent,
                               leaf_pairs=leaf_pairs)
    leaves = [v for v in parent if v != ROOT and not st.children.get(v)]
    for leaf in leaves:
        if leaf not in (z1, z2):
            leaf_pairs.append((leaf, z1))
            leaf_pairs.append((leaf, z2))
    return st


def normalized_network(st: TreeConstructionState) -> Network:
    """The complete network the normalized tree stands for (aux included)."""
    nodes = [v for v in st.parent if v != ROOT]
    desc = {v: set(st.leaves_under(v)) | _all_below(st, v) for v in nodes}
    touching = {frozenset(p) for p in st.leaf_pairs}
    cons = []
    for i, a in enumerate(nodes):
        for b in nodes[i + 1:]:
            if b in st.ancestors(a):
                cons.append((a, TPP, b))
            elif a in st.ancestors(b):
                cons.append((b, TPP, a))
            else:
                la, lb = st.leaves_under(a), st.leaves_under(b)
                ec = any(frozenset((x, y)) in touching for x in la for y in lb)
                cons.append((a, EC if ec else DC, b))
    return Network.build(nodes, cons)


def _all_below(st, v):
    out = set()
    for k in st.children.get(v, []):
        out.add(k)
        out |= _all_below(st, k)
    return out


# -- the construction --------------------------------------------------------------

def assign_parameters(st: TreeConstructionState, sigma: Fraction) -> None:
    """Recursive Assign from (1, 2): children of x get t_a < t_b inside
    (l1, l1 + delta); the left subtree recurses on (l1, t_a), the right one
    on (l2 - eps, l2)."""
    st.t.clear()

    def go(x, l1, l2):
        kids = st.children.get(x)
        if not kids:
            return
        a, b = kids
        step = (l2 - l1) * sigma
        st.sigma[x] = sigma
        ta = l1 + step / 3
        tb = l1 + 2 * step / 3
        st.t[a], st.t[b] = ta, tb
        go(a, l1, ta)
        go(b, l2 - step, l2)

    go(ROOT, Fraction(1), Fraction(2))


def _split(st, a, b):
    """(x, y, a, b) with x, y the children of lca(a, b), x left, a under x."""
    ca, cb = st.chain(a), st.chain(b)
    sb = set(cb)
    for i, u in enumerate(ca):
        if st.sibling(u) in sb:
            x, y = u, st.sibling(u)
            if st.children[st.parent[x]][0] != x:
                return y, x, b, a
            return x, y, a, b
    raise RealizationError("touching leaves without a common ancestor")


def _sq(p, q):
    return sum((x - y) ** 2 for x, y in zip(p, q))


def _required_lambda(st, a, b, x, y, p, hp, M):
    """Least lambda making q = p + lambda h closer to M(t_u) than to M(t_u')
    for every node u on the chains of a and b (u' its sibling)."""
    need = Fraction(0)
    for leaf in (a, b):
        for u in st.chain(leaf):
            if u in (x, y):
                continue
            v = st.sibling(u)
            gain = hp.value(M[u]) - hp.value(M[v])    # f(t_u) - f(t_v)
            c = _sq(p, M[u]) - _sq(p, M[v])
            if gain > 0:
                need = max(need, c / (2 * gain))
            elif c >= 0:
                return None
    return need


def build_tree_regions(st: TreeConstructionState, wanted, sigma, rho_scale, lam_scale):
    assign_parameters(st, sigma)
    M = {v: moment_point(t, 4) for v, t in st.t.items()}
    plans = []
    lam = Fraction(0)
    for a0, b0 in st.leaf_pairs:
        x, y, a, b = _split(st, a0, b0)
        hp = quartic_hyperplane(st.t[a], st.t[x], st.t[y], st.t[b])
        if hp.value(M[a]) < 0:
            hp = hp.flipped()
        if hp.value(M[a]) <= 0 or hp.value(M[b]) <= 0:
            return None
        p = tuple((u + w) / 2 for u, w in zip(M[x], M[y]))
        need = _required_lambda(st, a, b, x, y, p, hp, M)
        if need is None:
            return None
        lam = max(lam, need)
        plans.append((a, b, x, y, p, hp))
    scale = max((abs(c) for m in M.values() for c in m), default=Fraction(1))
    lam = max(2 * lam, 8 * scale) * lam_scale
    st.lambda_star = lam
    witness: dict[str, list] = {}
    for a, b, x, y, p, hp in plans:
        q = tuple(pi + lam * hi for pi, hi in zip(p, hp.normal))
        st.anchors[(a, b)] = q
        st.hyperplanes[(a, b)] = hp
        st.midpoints[(x, y)] = p
        witness.setdefault(a, []).append(q)
        witness.setdefault(b, []).append(q)
    leaf_pts: dict[str, list] = {}
    needed_leaves = {leaf for v in wanted for leaf in st.leaves_under(v)}
    for leaf in needed_leaves:
        rows = [bisector(M[u], M[st.sibling(u)]) for u in st.chain(leaf)]
        c = M[leaf]
        rho = None
        for r in rows:
            h = r[:4]
            slack = r[4] - sum(hi * ci for hi, ci in zip(h, c))
            if slack <= 0:
                return None
            reach = max(max(h), -sum(h))
            if reach > 0:
                cand = slack / (2 * reach)
                rho = cand if rho is None else min(rho, cand)
        rho = (rho if rho is not None else Fraction(1, 100)) * rho_scale
        leaf_pts[leaf] = list(simplex_around(c, rho).vertices) + witness.get(leaf, [])
    regions = {}
    for v in wanted:
        pts = [pt for leaf in st.leaves_under(v) for pt in leaf_pts[leaf]]
        regions[v] = convex_hull(pts)
    return regions


def realize_4d_tree(n: Network, retries: int = DEFAULT_RETRIES) -> Realization:
    if not n.is_atomic:
        raise NetworkError("needs an atomic network")
    used = n.used_relations()
    if used & ~(EC | DC | TPP | TPPI | NTPP | NTPPI | EQ):
        raise NetworkError("network uses relations outside {EC, DC, TPP, NTPP}")
    if used & (NTPP | NTPPI):
        from .spatial import nested_groups, nested_realization
        if nested_groups(n) is not None:
            flat = lambda sub: realize_4d_tree(sub, retries)
            return nested_realization(n, flat, 4, inner=flat)
        # groups that interleave with tangential parts: boxes do this directly
        from .search import realize_boxes
        got = realize_boxes(n, 4, node_budget=200000)
        if got is None:
            raise RealizationError("tree construction: NTPP groups are not closed and box search failed")
        return got
    st = normalize_tree(n)
    sigma, rho_scale, lam_scale = Fraction(1, 4), Fraction(1), Fraction(1)
    for _ in range(retries + 1):
        try:
            regions = build_tree_regions(st, n.vars, sigma, rho_scale, lam_scale)
        except DegenerateError:
            regions = None
        if regions is not None:
            r = Realization(4, regions)
            if is_valid(n, r):
                return r
        sigma /= 4
        rho_scale /= 4
        lam_scale *= 2
    raise RealizationError("tree construction: retry budget exhausted")
