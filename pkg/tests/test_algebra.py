from hypothesis import given
from hypothesis import strategies as st

from oracles import BIT, NAMES, box_composition_table
from rcc_convex.algebra import (
    ABBREVIATIONS, ALL_MASK, DC, EC, EQ, NTPP, NTPPI, PO, TPP, TPPI, Base, Rcc5, Relation, compose,
    compose_mask, converse, converse_mask, format_mask, from_rcc5, members, parse_mask, to_rcc5,
    weaken_mask,
)

masks = st.integers(min_value=1, max_value=ALL_MASK)


def test_composition_table_matches_box_model():
    # every cell is exactly what axis boxes in the plane realize
    table = box_composition_table()
    for r in NAMES:
        for s in NAMES:
            assert compose_mask(BIT[r], BIT[s]) == table[(r, s)], (r, s)


def test_known_cells():
    assert compose_mask(TPP, TPP) == TPP | NTPP
    assert compose_mask(NTPP, NTPP) == NTPP
    assert compose_mask(DC, DC) == ALL_MASK
    assert compose_mask(EQ, PO) == PO
    assert not compose_mask(TPP, PO) & EQ


def test_converse_pairs():
    assert converse_mask(TPP) == TPPI
    assert converse_mask(NTPPI) == NTPP
    for b in (DC, EC, PO, EQ):
        assert converse_mask(b) == b


@given(masks)
def test_converse_is_involution(m):
    assert converse_mask(converse_mask(m)) == m


@given(masks, masks)
def test_compose_converse_law(r, s):
    assert converse_mask(compose_mask(r, s)) == compose_mask(converse_mask(s), converse_mask(r))


@given(masks, masks, masks)
def test_compose_distributes_over_union(r, s, t):
    assert compose_mask(r | s, t) == compose_mask(r, t) | compose_mask(s, t)


@given(masks)
def test_eq_is_identity(m):
    assert compose_mask(EQ, m) == m
    assert compose_mask(m, EQ) == m


@given(masks)
def test_format_parse_roundtrip(m):
    assert parse_mask(format_mask(m)) == m


def test_parse_abbreviations():
    assert parse_mask("PP") == TPP | NTPP
    assert parse_mask("{DR,PO}") == DC | EC | PO
    assert parse_mask("ntppi") == NTPPI
    assert ABBREVIATIONS["R8"] == ALL_MASK


def test_parse_rejects_unknown():
    import pytest
    with pytest.raises(ValueError):
        parse_mask("XX")
    with pytest.raises(ValueError):
        parse_mask("{}")


def test_relation_object():
    r = Relation.parse("{TPP,NTPP}")
    assert len(r) == 2 and Base.TPP in r
    assert converse(r) == Relation(TPPI | NTPPI)
    assert compose(Relation(EQ), r) == r
    assert [b.label for b in members(PO | EQ)] == ["PO", "EQ"]


def test_rcc5_blocks():
    assert to_rcc5(TPP) == frozenset({Rcc5.PP})
    assert from_rcc5(["DR"]).mask == DC | EC
    assert to_rcc5(ALL_MASK) == frozenset(Rcc5)


def test_weaken():
    assert weaken_mask(TPP) == TPP | NTPP
    assert weaken_mask(EC) == EC | DC
    assert weaken_mask(PO) == PO


@given(masks)
def test_weaken_is_monotone_and_idempotent(m):
    w = weaken_mask(m)
    assert w & m == m
    assert weaken_mask(w) == w
