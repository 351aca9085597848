"""Brute-force ground truth: atomic network enumeration up to isomorphism and
exact one-dimensional realizability by endpoint search."""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable

from .algebra import ALL_MASK, DC, EC, EQ, NTPP, NTPPI, PO, TPP, TPPI, converse_mask, members, weaken_mask
from .consistency import closure_masks
from .network import Network, NetworkError, canonical_form

MAX_ENUM_VARS = 6
RCC8_NO_EQ = ALL_MASK & ~EQ


def _as_mask(allowed) -> int:
    if isinstance(allowed, int):
        return allowed
    mask = 0
    for r in allowed:
        if isinstance(r, str):
            from .algebra import parse_mask
            mask |= parse_mask(r)
        else:
            mask |= r.bit if hasattr(r, "bit") else int(r)
    return mask


def close_converse(mask: int) -> int:
    return mask | converse_mask(mask)


def default_names(m: int) -> list[str]:
    return [chr(ord("a") + i) for i in range(m)] if m <= 26 else [f"v{i}" for i in range(m)]


def _labelings(m: int, allowed: int):
    """Yield path-consistent atomic matrices over ``allowed`` (with converses)."""
    pairs = [(i, j) for i in range(m) for j in range(i + 1, m)]
    rows = [[EQ if i == j else allowed for j in range(m)] for i in range(m)]
    if not closure_masks(rows):
        return

    def go(k, rows):
        if k == len(pairs):
            yield rows
            return
        i, j = pairs[k]
        for b in members(rows[i][j]):
            trial = [list(r) for r in rows]
            trial[i][j] = b.bit
            trial[j][i] = converse_mask(b.bit)
            if closure_masks(trial):
                yield from go(k + 1, trial)

    yield from go(0, rows)


def enumerate_atomic(var_count: int, allowed=RCC8_NO_EQ, names: list[str] | None = None) -> list[Network]:
    """One consistent atomic network per isomorphism class, sorted by canonical key."""
    if var_count > MAX_ENUM_VARS:
        raise NetworkError(f"enumeration is limited to {MAX_ENUM_VARS} variables")
    if var_count < 1:
        raise NetworkError("need at least one variable")
    allowed = close_converse(_as_mask(allowed)) & ~EQ
    names = names or default_names(var_count)
    seen: dict[tuple, Network] = {}
    for rows in _labelings(var_count, allowed):
        net = Network(names, rows)
        key, order = canonical_form(net)
        if key not in seen:
            seen[key] = net.permuted([names[i] for i in order]).rename(
                {names[i]: names[k] for k, i in enumerate(order)})
    return [seen[k] for k in sorted(seen)]


# -- one-dimensional realizability ------------------------------------------------

def interval_relation(a: tuple, b: tuple) -> int:
    """RCC8 base relation (as a mask) between closed intervals with lo < hi."""
    l1, u1 = a
    l2, u2 = b
    if u1 < l2 or u2 < l1:
        return DC
    if u1 == l2 or u2 == l1:
        return EC
    if l1 == l2 and u1 == u2:
        return EQ
    if l2 <= l1 and u1 <= u2:
        return NTPP if (l2 < l1 and u1 < u2) else TPP
    if l1 <= l2 and u2 <= u1:
        return NTPPI if (l1 < l2 and u2 < u1) else TPPI
    return PO


def _candidates(values: list[Fraction], above=None) -> list[Fraction]:
    """One representative for each position relative to the sorted values."""
    if not values:
        return [Fraction(0)] if above is None else [above + 1]
    out = [values[0] - 1]
    for i, v in enumerate(values):
        out.append(v)
        out.append((v + values[i + 1]) / 2 if i + 1 < len(values) else v + 1)
    if above is not None:
        out = [c for c in out if c > above]
        if not any(c > above for c in values) and above + 1 not in out:
            out.append(above + 1)
    return out


def realizable_1d(n: Network, weak: bool = False) -> dict[str, tuple[Fraction, Fraction]] | None:
    """Witness intervals for n (weakly, if asked) or None.  Complete search over
    the relative order of endpoints, one variable at a time."""
    if not n.is_atomic:
        raise NetworkError("1D realizability needs an atomic network")
    vs = n.vars
    m = len(vs)
    allowed = [[weaken_mask(n.mask(i, j)) if weak else n.mask(i, j) for j in range(m)] for i in range(m)]
    placed: list[tuple[Fraction, Fraction]] = []

    def go(k: int, values: list[Fraction]):
        if k == m:
            return True
        for lo in _candidates(values):
            vals_lo = sorted(set(values) | {lo})
            for hi in _candidates(vals_lo, above=lo):
                iv = (lo, hi)
                if all(interval_relation(iv, placed[i]) & allowed[k][i] for i in range(k)):
                    placed.append(iv)
                    if go(k + 1, sorted(set(vals_lo) | {hi})):
                        return True
                    placed.pop()
        return False

    if not go(0, []):
        return None
    # renumber endpoints as small integers
    ranks = {v: Fraction(i) for i, v in enumerate(sorted({x for iv in placed for x in iv}))}
    return {vs[i]: (ranks[lo], ranks[hi]) for i, (lo, hi) in enumerate(placed)}


def classify_1d_gap(var_count: int, allowed=RCC8_NO_EQ, weak: bool = False) -> list[Network]:
    """Consistent classes over ``allowed`` with no (weak) convex solution in R."""
    return [net for net in enumerate_atomic(var_count, allowed) if realizable_1d(net, weak) is None]


# -- random sampling ----------------------------------------------------------------

def random_atomic_network(var_count: int, seed: int, allowed=RCC8_NO_EQ,
                          names: list[str] | None = None) -> Network:
    """A random consistent atomic network: pairs are fixed in random order to a
    random base relation still allowed after path consistency."""
    rng = random.Random(seed)
    allowed = close_converse(_as_mask(allowed)) & ~EQ
    names = names or default_names(var_count)
    m = var_count
    for _ in range(100):
        rows = [[EQ if i == j else allowed for j in range(m)] for i in range(m)]
        if not closure_masks(rows):
            raise NetworkError("no consistent network over these relations")
        pairs = [(i, j) for i in range(m) for j in range(i + 1, m)]
        rng.shuffle(pairs)
        ok = True
        for i, j in pairs:
            options = list(members(rows[i][j]))
            rng.shuffle(options)
            for b in options:
                trial = [list(r) for r in rows]
                trial[i][j] = b.bit
                trial[j][i] = converse_mask(b.bit)
                if closure_masks(trial):
                    rows = trial
                    break
            else:
                ok = False
                break
        if ok:
            return Network(names, rows)
    raise NetworkError("sampler failed to find a consistent network")


def sample_networks(var_count: int, count: int, seed: int = 0, allowed=RCC8_NO_EQ) -> list[Network]:
    return [random_atomic_network(var_count, seed * 100003 + k, allowed) for k in range(count)]


# -- golden counts -----------------------------------------------------------------

GOLDEN_MANIFEST = "golden_counts.txt"


def load_golden_counts() -> dict[tuple[int, str, str], int]:
    """Checked-in class counts keyed by (vars, relations, kind)."""
    from importlib import resources
    text = resources.files(__package__).joinpath(GOLDEN_MANIFEST).read_text()
    out = {}
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        m, rels, kind, count = line.split()
        out[(int(m), rels, kind)] = int(count)
    return out
