"""Complete constraint networks over named variables."""
from __future__ import annotations

import itertools
import re
from typing import Iterable, Sequence

from .algebra import (
    ALL_MASK, EQ, Base, Relation, converse_mask, format_mask, members, parse_mask,
)


class NetworkError(ValueError):
    pass


class ParseError(NetworkError):
    pass


class Network:
    """Variables plus a converse-coherent matrix of relation masks.

    The matrix is private; use ``mask``/``rel`` to read and ``with_constraint``
    or ``Network.build`` to produce new networks.
    """

    __slots__ = ("vars", "_m", "_index")

    def __init__(self, vars: Sequence[str], matrix: Sequence[Sequence[int]] | None = None):
        vars = tuple(vars)
        if len(set(vars)) != len(vars):
            raise NetworkError("duplicate variable names")
        m = len(vars)
        if matrix is None:
            matrix = [[EQ if i == j else ALL_MASK for j in range(m)] for i in range(m)]
        rows = [list(r) for r in matrix]
        for i in range(m):
            if rows[i][i] != EQ:
                raise NetworkError("diagonal must be EQ")
            for j in range(i + 1, m):
                if rows[i][j] == 0 or rows[j][i] != converse_mask(rows[i][j]):
                    raise NetworkError(f"entries ({vars[i]},{vars[j]}) are not converse-coherent")
        self.vars = vars
        self._m = tuple(tuple(r) for r in rows)
        self._index = {v: i for i, v in enumerate(vars)}

    # -- construction -------------------------------------------------------
    @classmethod
    def build(cls, vars: Iterable[str], constraints: Iterable[tuple[str, int | Relation | str, str]] = ()):
        """Network from (a, relation, b) triples; repeated pairs are intersected."""
        vars = list(vars)
        seen = set(vars)
        cons = list(constraints)
        for a, _, b in cons:
            for v in (a, b):
                if v not in seen:
                    seen.add(v)
                    vars.append(v)
        idx = {v: i for i, v in enumerate(vars)}
        m = len(vars)
        rows = [[EQ if i == j else ALL_MASK for j in range(m)] for i in range(m)]
        for a, r, b in cons:
            mask = _as_mask(r)
            i, j = idx[a], idx[b]
            if i == j:
                if not mask & EQ:
                    raise NetworkError(f"{a} must be EQ to itself")
                continue
            new = rows[i][j] & mask
            if not new:
                raise NetworkError(f"conflicting constraints on ({a},{b})")
            rows[i][j] = new
            rows[j][i] = converse_mask(new)
        return cls(vars, rows)

    def with_constraint(self, a: str | int, r: int | Relation | str, b: str | int) -> "Network":
        i, j = self._idx(a), self._idx(b)
        rows = [list(x) for x in self._m]
        mask = _as_mask(r)
        rows[i][j] = mask
        rows[j][i] = converse_mask(mask)
        return Network(self.vars, rows)

    def with_masks(self, rows: Sequence[Sequence[int]]) -> "Network":
        return Network(self.vars, rows)

    # -- access ------------------------------------------------------------
    def __len__(self) -> int:
        return len(self.vars)

    def _idx(self, v: str | int) -> int:
        if isinstance(v, int):
            return v
        try:
            return self._index[v]
        except KeyError:
            raise NetworkError(f"unknown variable {v!r}") from None

    def index(self, v: str) -> int:
        return self._idx(v)

    def mask(self, a: str | int, b: str | int) -> int:
        return self._m[self._idx(a)][self._idx(b)]

    def rel(self, a: str | int, b: str | int) -> Relation:
        return Relation(self.mask(a, b))

    def base(self, a: str | int, b: str | int) -> Base:
        return Relation(self.mask(a, b)).base()

    def matrix(self) -> list[list[int]]:
        return [list(r) for r in self._m]

    @property
    def is_atomic(self) -> bool:
        return all(x & (x - 1) == 0 for r in self._m for x in r)

    def used_relations(self) -> int:
        """Union of off-diagonal masks (as a mask)."""
        out = 0
        m = len(self.vars)
        for i in range(m):
            for j in range(m):
                if i != j:
                    out |= self._m[i][j]
        return out

    def pairs(self):
        m = len(self.vars)
        for i in range(m):
            for j in range(i + 1, m):
                yield i, j

    def __eq__(self, other) -> bool:
        return isinstance(other, Network) and self.vars == other.vars and self._m == other._m

    def __hash__(self) -> int:
        return hash((self.vars, self._m))

    def __repr__(self) -> str:
        return f"Network({' '.join(self.vars)})"

    # -- operations --------------------------------------------------------
    def restrict(self, subset: Iterable[str]) -> "Network":
        keep = set(subset)
        for v in keep:
            self._idx(v)
        ids = [i for i, v in enumerate(self.vars) if v in keep]
        return Network([self.vars[i] for i in ids], [[self._m[i][j] for j in ids] for i in ids])

    def rename(self, mapping: dict[str, str]) -> "Network":
        return Network([mapping.get(v, v) for v in self.vars], self._m)

    def permuted(self, order: Sequence[str]) -> "Network":
        ids = [self._idx(v) for v in order]
        return Network([self.vars[i] for i in ids], [[self._m[i][j] for j in ids] for i in ids])

    def sorted(self) -> "Network":
        return self.permuted(sorted(self.vars))

    def entails_atomic(self, a: str | int, b: str | int, r: int | Relation | str) -> bool:
        if not self.is_atomic:
            raise NetworkError("entailment check needs an atomic network")
        return bool(self.mask(a, b) & _as_mask(r))

    def to_text(self) -> str:
        net = self.sorted()
        lines = ["vars: " + " ".join(net.vars)]
        for i, j in net.pairs():
            mk = net._m[i][j]
            if mk != ALL_MASK:
                lines.append(f"{net.vars[i]} {format_mask(mk)} {net.vars[j]}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Network":
        return parse_network(text)


def _as_mask(r) -> int:
    if isinstance(r, Relation):
        return r.mask
    if isinstance(r, Base):
        return r.bit
    if isinstance(r, str):
        return parse_mask(r)
    return int(r)


_LINE = re.compile(r"^(\S+)\s+(\{[^}]*\}|\S+)\s+(\S+)$")


def parse_network(text: str) -> Network:
    vars: list[str] = []
    cons = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.lower().startswith("vars:"):
            for v in line[5:].split():
                if v not in vars:
                    vars.append(v)
            continue
        mt = _LINE.match(line)
        if not mt:
            raise ParseError(f"line {lineno}: cannot parse {raw!r}")
        a, r, b = mt.groups()
        try:
            mask = parse_mask(r)
        except ValueError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
        cons.append((a, mask, b))
    try:
        return Network.build(vars, cons)
    except NetworkError as exc:
        raise ParseError(str(exc)) from None


# -- isomorphism ------------------------------------------------------------

def _signature(net: Network, i: int) -> tuple:
    return tuple(sorted(net.mask(i, j) for j in range(len(net)) if j != i))


def canonical_form(net: Network) -> tuple[tuple, tuple[int, ...]]:
    """(key, order): key is the lexicographically least upper-triangle mask
    tuple over orderings that keep the per-variable signatures sorted; order
    lists the original indices in canonical position order."""
    m = len(net)
    sigs = [_signature(net, i) for i in range(m)]
    groups: dict[tuple, list[int]] = {}
    for i, s in enumerate(sigs):
        groups.setdefault(s, []).append(i)
    keys = sorted(groups)
    head = tuple(keys)
    best = None
    best_order = None
    for combo in itertools.product(*(itertools.permutations(groups[k]) for k in keys)):
        order = [i for part in combo for i in part]
        tri = tuple(net.mask(order[a], order[b]) for a in range(m) for b in range(a + 1, m))
        if best is None or tri < best:
            best, best_order = tri, order
    if best is None:
        best, best_order = (), []
    return (head, best), tuple(best_order)


def canonical_key(net: Network) -> tuple:
    return canonical_form(net)[0]


def isomorphic(n1: Network, n2: Network) -> dict[str, str] | None:
    """A variable bijection pi with n1[i][j] == n2[pi(i)][pi(j)], or None."""
    if len(n1) != len(n2):
        return None
    k1, o1 = canonical_form(n1)
    k2, o2 = canonical_form(n2)
    if k1 != k2:
        return None
    return {n1.vars[a]: n2.vars[b] for a, b in zip(o1, o2)}


# -- EQ quotient ----------------------------------------------------------------

def merge_eq_map(net: Network) -> tuple[Network, dict[str, str]]:
    """Quotient by entailed EQ edges; also returns variable -> representative."""
    m = len(net)
    parent = list(range(m))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in net.pairs():
        if net.mask(i, j) == EQ:
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    classes: dict[int, list[int]] = {}
    for i in range(m):
        classes.setdefault(find(i), []).append(i)
    reps = sorted(classes)
    for r in reps:
        for a, b in itertools.combinations(classes[r], 2):
            if not net.mask(a, b) & EQ:
                raise NetworkError(f"{net.vars[a]} EQ {net.vars[b]} conflicts with {format_mask(net.mask(a, b))}")
    rows = []
    for r in reps:
        row = []
        for s in reps:
            if r == s:
                row.append(EQ)
                continue
            mk = ALL_MASK
            for a in classes[r]:
                for b in classes[s]:
                    mk &= net.mask(a, b)
            if not mk:
                raise NetworkError(f"EQ merge empties the relation between {net.vars[r]} and {net.vars[s]}")
            row.append(mk)
        rows.append(row)
    quotient = Network([net.vars[r] for r in reps], rows)
    mapping = {net.vars[i]: net.vars[find(i)] for i in range(m)}
    return quotient, mapping


def merge_eq(net: Network) -> Network:
    return merge_eq_map(net)[0]


def atomic_labels(net: Network) -> dict[tuple[str, str], str]:
    return {(net.vars[i], net.vars[j]): format_mask(net.mask(i, j)) for i, j in net.pairs()}


__all__ = [
    "Network", "NetworkError", "ParseError", "parse_network", "canonical_form",
    "canonical_key", "isomorphic", "merge_eq", "merge_eq_map", "members",
]
