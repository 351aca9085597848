"""RCC8 / RCC5 relation algebra.

Relations are stored as 8-bit masks, one bit per base relation, wrapped in
an immutable ``Relation`` value.  Composition of base relations comes from a
static table; composition of sets is the union over member pairs.
"""
from __future__ import annotations

import enum
from functools import lru_cache
from typing import Iterable, Iterator


class Base(enum.IntEnum):
    DC = 0
    EC = 1
    PO = 2
    TPP = 3
    NTPP = 4
    TPPI = 5
    NTPPI = 6
    EQ = 7

    @property
    def bit(self) -> int:
        return 1 << self.value

    @property
    def label(self) -> str:
        return BASE_LABELS[self.value]


BASE_LABELS = ("DC", "EC", "PO", "TPP", "NTPP", "TPPi", "NTPPi", "EQ")
ALL_MASK = 0xFF

DC, EC, PO, TPP, NTPP, TPPI, NTPPI, EQ = (1 << i for i in range(8))

_CONVERSE_BASE = {
    Base.DC: Base.DC, Base.EC: Base.EC, Base.PO: Base.PO, Base.EQ: Base.EQ,
    Base.TPP: Base.TPPI, Base.TPPI: Base.TPP,
    Base.NTPP: Base.NTPPI, Base.NTPPI: Base.NTPP,
}


def _m(*names: str) -> int:
    mask = 0
    for n in names:
        mask |= Base[n.upper()].bit
    return mask


_R8 = ALL_MASK
_LOW = _m("DC", "EC", "PO", "TPP", "NTPP")     # "a is left of / inside" block
_HIGH = _m("DC", "EC", "PO", "TPPI", "NTPPI")

# rows: first argument, columns: second argument (DC EC PO TPP NTPP TPPi NTPPi)
_TABLE = {
    Base.DC: (_R8, _LOW, _LOW, _LOW, _LOW, DC, DC),
    Base.EC: (_HIGH, _m("DC", "EC", "PO", "TPP", "TPPI", "EQ"), _LOW,
              _m("EC", "PO", "TPP", "NTPP"), _m("PO", "TPP", "NTPP"), _m("DC", "EC"), DC),
    Base.PO: (_HIGH, _HIGH, _R8, _m("PO", "TPP", "NTPP"), _m("PO", "TPP", "NTPP"), _HIGH, _HIGH),
    Base.TPP: (DC, _m("DC", "EC"), _LOW, _m("TPP", "NTPP"), NTPP,
               _m("DC", "EC", "PO", "TPP", "TPPI", "EQ"), _HIGH),
    Base.NTPP: (DC, DC, _LOW, NTPP, NTPP, _LOW, _R8),
    Base.TPPI: (_HIGH, _m("EC", "PO", "TPPI", "NTPPI"), _m("PO", "TPPI", "NTPPI"),
                _m("PO", "EQ", "TPP", "TPPI"), _m("PO", "TPP", "NTPP"), _m("TPPI", "NTPPI"), NTPPI),
    Base.NTPPI: (_HIGH, _m("PO", "TPPI", "NTPPI"), _m("PO", "TPPI", "NTPPI"), _m("PO", "TPPI", "NTPPI"),
                 _m("PO", "TPP", "NTPP", "TPPI", "NTPPI", "EQ"), NTPPI, NTPPI),
}


def _base_compose(r: Base, s: Base) -> int:
    # EQ is the identity on both sides
    if r == Base.EQ:
        return s.bit
    if s == Base.EQ:
        return r.bit
    return _TABLE[r][s.value]


BASE_COMPOSE = tuple(tuple(_base_compose(Base(i), Base(j)) for j in range(8)) for i in range(8))
BASE_CONVERSE = tuple(_CONVERSE_BASE[Base(i)].bit for i in range(8))


def members(mask: int) -> Iterator[Base]:
    for i in range(8):
        if mask >> i & 1:
            yield Base(i)


def converse_mask(mask: int) -> int:
    out = 0
    for i in range(8):
        if mask >> i & 1:
            out |= BASE_CONVERSE[i]
    return out


@lru_cache(maxsize=None)
def compose_mask(r: int, s: int) -> int:
    out = 0
    for i in range(8):
        if r >> i & 1:
            row = BASE_COMPOSE[i]
            for j in range(8):
                if s >> j & 1:
                    out |= row[j]
                    if out == ALL_MASK:
                        return out
    return out


# named abbreviations
ABBREVIATIONS = {
    "PP": TPP | NTPP,
    "PPI": TPPI | NTPPI,
    "P": TPP | NTPP | EQ,
    "PI": TPPI | NTPPI | EQ,
    "O": PO | TPP | NTPP | TPPI | NTPPI | EQ,
    "C": ALL_MASK & ~DC,
    "DR": DC | EC,
    "R8": ALL_MASK,
}


class Relation:
    """Nonempty set of RCC8 base relations (immutable)."""

    __slots__ = ("mask",)

    def __init__(self, mask: int):
        if not 0 < mask <= ALL_MASK:
            raise ValueError("relation must be a nonempty subset of the 8 base relations")
        object.__setattr__(self, "mask", mask)

    def __setattr__(self, key, value):
        raise AttributeError("Relation is immutable")

    @classmethod
    def of(cls, *bases: Base | str) -> "Relation":
        mask = 0
        for b in bases:
            mask |= (Base[b.upper()] if isinstance(b, str) else b).bit
        return cls(mask)

    @classmethod
    def parse(cls, text: str) -> "Relation":
        return cls(parse_mask(text))

    def __iter__(self) -> Iterator[Base]:
        return members(self.mask)

    def __contains__(self, b: Base) -> bool:
        return bool(self.mask & b.bit)

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __eq__(self, other) -> bool:
        return isinstance(other, Relation) and other.mask == self.mask

    def __hash__(self) -> int:
        return hash(("Relation", self.mask))

    def __le__(self, other: "Relation") -> bool:
        return self.mask & ~other.mask == 0

    def __or__(self, other: "Relation") -> "Relation":
        return Relation(self.mask | other.mask)

    def __and__(self, other: "Relation") -> "Relation | None":
        m = self.mask & other.mask
        return Relation(m) if m else None

    @property
    def is_base(self) -> bool:
        return self.mask & (self.mask - 1) == 0

    def base(self) -> Base:
        if not self.is_base:
            raise ValueError(f"{self} is not a base relation")
        return Base(self.mask.bit_length() - 1)

    def __str__(self) -> str:
        return format_mask(self.mask)

    def __repr__(self) -> str:
        return f"Relation({self})"


R8 = Relation(ALL_MASK)


def format_mask(mask: int) -> str:
    names = [BASE_LABELS[b] for b in members(mask)]
    if len(names) == 1:
        return names[0]
    return "{" + ",".join(names) + "}"


def _token_mask(tok: str) -> int:
    t = tok.strip().upper()
    if t in ABBREVIATIONS:
        return ABBREVIATIONS[t]
    try:
        return Base[t].bit
    except KeyError:
        raise ValueError(f"unknown relation name {tok!r}") from None


def parse_mask(text: str) -> int:
    s = text.strip()
    if s.startswith("{"):
        if not s.endswith("}"):
            raise ValueError(f"unterminated relation set {text!r}")
        body = s[1:-1].strip()
        if not body:
            raise ValueError("empty relation set")
        mask = 0
        for tok in body.split(","):
            mask |= _token_mask(tok)
        return mask
    return _token_mask(s)


def converse(r: Relation) -> Relation:
    return Relation(converse_mask(r.mask))


def compose(r: Relation, s: Relation) -> Relation:
    return Relation(compose_mask(r.mask, s.mask))


# -- RCC5 -----------------------------------------------------------------

class Rcc5(enum.IntEnum):
    EQ = 0
    DR = 1
    PO = 2
    PP = 3
    PPI = 4

    @property
    def bit(self) -> int:
        return 1 << self.value


RCC5_BLOCKS = {
    Rcc5.EQ: EQ,
    Rcc5.DR: DC | EC,
    Rcc5.PO: PO,
    Rcc5.PP: TPP | NTPP,
    Rcc5.PPI: TPPI | NTPPI,
}


def to_rcc5(r: Relation | int) -> frozenset[Rcc5]:
    mask = r.mask if isinstance(r, Relation) else r
    if not mask:
        raise ValueError("empty relation")
    return frozenset(b for b, block in RCC5_BLOCKS.items() if mask & block)


def from_rcc5(blocks: Iterable[Rcc5 | str]) -> Relation:
    mask = 0
    for b in blocks:
        b = Rcc5[b.upper()] if isinstance(b, str) else b
        mask |= RCC5_BLOCKS[b]
    return Relation(mask)


def weaken_mask(mask: int) -> int:
    """Widen TPP to PP and EC to DR (the reading used for weak solutions)."""
    if mask & TPP:
        mask |= NTPP
    if mask & TPPI:
        mask |= NTPPI
    if mask & EC:
        mask |= DC
    return mask
