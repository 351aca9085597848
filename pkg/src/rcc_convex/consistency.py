"""Path consistency and backtracking search for RCC8 networks."""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from typing import NamedTuple

from .algebra import (
    DC, EC, EQ, NTPP, NTPPI, PO, TPP, TPPI, Relation, compose_mask, converse_mask, format_mask,
)
from .network import Network

VALUE_ORDER = (DC, EC, PO, TPP, TPPI, NTPP, NTPPI, EQ)
# prefers strict nesting and disjointness: easiest for set-model constructions
NESTED_ORDER = (DC, NTPP, NTPPI, PO, EC, TPP, TPPI, EQ)


class Step(NamedTuple):
    i: int
    j: int
    k: int
    old: int      # mask before
    new: int      # mask after (0 only for the emptying step)


@dataclass
class RefinementTrace:
    steps: list[Step] = field(default_factory=list)
    consistent: bool = True
    inconsistent_at: tuple[int, int, int] | None = None

    @property
    def outcome(self) -> str:
        if self.consistent:
            return "consistent"
        i, j, k = self.inconsistent_at
        return f"inconsistent-at({i},{j},{k})"

    def describe(self, net: Network) -> list[str]:
        v = net.vars
        out = []
        for s in self.steps:
            new = format_mask(s.new) if s.new else "{}"
            out.append(f"({v[s.i]},{v[s.k]}) via {v[s.j]}: {format_mask(s.old)} -> {new}")
        if self.consistent:
            out.append("consistent")
        else:
            i, j, k = self.inconsistent_at
            out.append(f"inconsistent: ({v[i]},{v[k]}) emptied via {v[j]}")
        return out


def _close(rows: list[list[int]], record: bool, trace: RefinementTrace | None,
           start: list[tuple[int, int]] | None = None) -> bool:
    """PC-2 style fixpoint in place; returns False when an entry empties."""
    m = len(rows)
    if start is None:
        start = [(i, j) for i in range(m) for j in range(i + 1, m)]
    queue = deque(start)
    queued = set(start)
    while queue:
        i, j = queue.popleft()
        queued.discard((i, j))
        rij = rows[i][j]
        for k in range(m):
            if k == i or k == j:
                continue
            # (i,k) through j
            old = rows[i][k]
            new = old & compose_mask(rij, rows[j][k])
            if new != old:
                if record:
                    trace.steps.append(Step(i, j, k, old, new))
                if not new:
                    if trace is not None:
                        trace.consistent = False
                        trace.inconsistent_at = (i, j, k)
                    return False
                rows[i][k] = new
                rows[k][i] = converse_mask(new)
                key = (i, k) if i < k else (k, i)
                if key not in queued:
                    queued.add(key)
                    queue.append(key)
            # (k,j) through i
            old = rows[k][j]
            new = old & compose_mask(rows[k][i], rij)
            if new != old:
                if record:
                    trace.steps.append(Step(k, i, j, old, new))
                if not new:
                    if trace is not None:
                        trace.consistent = False
                        trace.inconsistent_at = (k, i, j)
                    return False
                rows[k][j] = new
                rows[j][k] = converse_mask(new)
                key = (k, j) if k < j else (j, k)
                if key not in queued:
                    queued.add(key)
                    queue.append(key)
    return True


def path_consistency(net: Network, record: bool = True) -> tuple[Network, RefinementTrace]:
    """Algebraic closure. On inconsistency the returned network is the input."""
    rows = net.matrix()
    trace = RefinementTrace()
    ok = _close(rows, record, trace)
    if not ok:
        return net, trace
    return net.with_masks(rows), trace


def is_path_consistent(net: Network) -> bool:
    return _close(net.matrix(), False, None)


def closure_masks(rows: list[list[int]]) -> bool:
    """In-place closure on a raw mask matrix (no trace)."""
    return _close(rows, False, None)


def _pick_pair(rows):
    best = None
    m = len(rows)
    for i in range(m):
        for j in range(i + 1, m):
            x = rows[i][j]
            if x & (x - 1):
                c = bin(x).count("1")
                if best is None or c < best[0]:
                    best = (c, i, j)
    return best


def _search(rows, rng: random.Random | None, allowed: int | None, order=VALUE_ORDER):
    if not _close(rows, False, None):
        return None
    pick = _pick_pair(rows)
    if pick is None:
        return rows
    _, i, j = pick
    values = [b for b in order if rows[i][j] & b]
    if allowed is not None:
        values = [b for b in values if b & allowed]
    if rng is not None:
        rng.shuffle(values)
    for b in values:
        trial = [list(r) for r in rows]
        trial[i][j] = b
        trial[j][i] = converse_mask(b)
        # only the refined pair needs re-propagating
        if not _close(trial, False, None, [(i, j)]):
            continue
        got = _search(trial, rng, allowed, order)
        if got is not None:
            return got
    return None


def atomic_refinement(net: Network, seed: int | None = None, allowed: int | None = None,
                      order=VALUE_ORDER) -> Network | None:
    """A path-consistent atomic refinement, or None.

    With a seed the value order is shuffled; ``allowed`` restricts the base
    relations tried on non-singleton pairs (singletons are kept as given);
    ``order`` is the value order when no seed is given.
    """
    rng = random.Random(seed) if seed is not None else None
    got = _search(net.matrix(), rng, allowed, tuple(order))
    return None if got is None else net.with_masks(got)


def is_consistent(net: Network) -> bool:
    return atomic_refinement(net) is not None


__all__ = [
    "RefinementTrace", "Step", "path_consistency", "is_path_consistent", "is_consistent",
    "atomic_refinement", "closure_masks", "VALUE_ORDER", "NESTED_ORDER",
]
