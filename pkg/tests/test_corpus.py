import warnings

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rcc_convex.algebra import ALL_MASK, DC, EC, NTPP, NTPPI, PO, TPP, TPPI
from rcc_convex.consistency import is_path_consistent, path_consistency
from rcc_convex.corpus import (
    DR, FAMILIES, PP, PPI, CorpusError, gen, manifest, radon, transform_hardness_lift,
    transform_po_elimination, uses_only,
)
from rcc_convex.network import Network
from rcc_convex.oracle import random_atomic_network
from rcc_convex.realize import realize, verify


def count(n, mask):
    return sum(1 for i, j in n.pairs() if n.mask(i, j) == mask)


def test_every_family_generates_a_path_consistent_network():
    for name in FAMILIES:
        n = gen(name)
        assert is_path_consistent(n), name
    assert {row["family"] for row in manifest()} == set(FAMILIES)


def test_example1_network():
    n = gen("example1_theta2d")
    assert n.vars == ("a", "b", "x", "y", "u", "v")
    assert n.is_atomic
    listed = [("a", EC, "b"), ("x", TPP, "a"), ("y", TPP, "a"), ("u", TPP, "b"), ("v", TPP, "b"),
              ("x", DC, "y"), ("u", DC, "v"), ("x", EC, "u"), ("x", EC, "v"), ("y", EC, "u"), ("y", EC, "v")]
    assert len(listed) == 11
    for a, r, b in listed:
        assert n.mask(a, b) == r
    # the four pairs left open are forced to touch
    assert n.mask("u", "a") == EC and n.mask("x", "b") == EC


def test_k33_ec_counts():
    n = gen("k33_ec")
    assert len(n) == 6 and count(n, EC) == 9 and count(n, DC) == 6


def test_k33_po_variants():
    dr = gen("k33_po")
    assert len(dr) == 15 and count(dr, PO) == 18 and count(dr, DR) == 105 - 18
    for variant, fill in (("dc", DC), ("ec", EC)):
        n = gen("k33_po", variant=variant)
        assert n.is_atomic and count(n, fill) == 105 - 18
    with pytest.raises(CorpusError):
        gen("k33_po", variant="xx")


def test_radon_sizes_and_labels():
    n = radon(1)
    assert len(n) == 3 + 7
    assert n.mask("a_1", "b_12") == PP
    assert n.mask("a_3", "b_12") == DR
    assert n.mask("b_1", "b_12") == PP
    assert n.mask("b_12", "b_13") == PO
    assert n.mask("b_12", "b_3") == DR
    assert len(radon(2)) == 4 + 15
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        assert len(radon(1)) == 10
        assert not caught


@pytest.mark.parametrize("k", [1, 2])
def test_radon_realizes_one_dimension_up(k):
    n = radon(k)
    r = realize(n, k + 1)
    assert r.dim == k + 1
    assert verify(n, r, check_common_part=False).ok


def test_theta_nd_size():
    for n in (4, 5, 6):
        net = gen("theta_nd", n=n)
        assert len(net) == 3 * n
        assert is_path_consistent(net)
    with pytest.raises(CorpusError):
        gen("theta_nd", n=3)


def test_other_families():
    assert len(gen("theta3d")) == 8
    assert len(gen("ec_tpp_square")) == 32 and gen("ec_tpp_square").is_atomic
    assert len(gen("ec_tpp_square", n=3)) == 20
    chain = gen("tpp_ntpp_chain")
    assert chain.mask("a1", "a4") == NTPP and chain.mask("a1", "a2") == TPP
    hexagon = gen("po_pp_hexagon")
    assert hexagon.mask("d", "a") == TPP and hexagon.mask("d", "c") == PO
    assert gen("po_pp_hexagon", variant="pp").mask("e", "c") == PP
    assert gen("n3_2").mask("a", "b") == PO


def test_gen_rejects_bad_parameters():
    with pytest.raises(CorpusError):
        gen("nope")
    with pytest.raises(CorpusError):
        gen("k33_ec", n=3)
    with pytest.raises(CorpusError):
        gen("radon", variant="dc")


def test_po_elimination_gadget():
    n = Network.build([], [("a", PO, "b")])
    out = transform_po_elimination(n)
    assert len(out) == 5
    assert out.mask("a", "b") == ALL_MASK
    assert uses_only(out, EC | TPP | TPPI)
    closed, trace = path_consistency(out)
    assert trace.consistent and closed.mask("a", "b") == PO


def test_po_elimination_without_po_is_identity():
    n = Network.build([], [("a", TPP, "b"), ("b", EC, "c"), ("a", EC, "c")])
    assert transform_po_elimination(n) == n


def test_po_elimination_fragment_check():
    with pytest.raises(CorpusError):
        transform_po_elimination(Network.build([], [("a", DC, "b")]))


def test_hardness_lift_scheme():
    out = transform_hardness_lift(Network.build(["p"]))
    assert len(out) == 5
    n = Network.build([], [("p", EC, "q")])
    out = transform_hardness_lift(n)
    assert len(out) == 2 + 2 + 4
    assert out.mask("a", "b") == EC
    assert out.mask("p1", "a") == PP and out.mask("q2", "b") == PP
    assert out.mask("p1", "q1") == EC and out.mask("p2", "q2") == EC
    assert is_path_consistent(out)
    with pytest.raises(CorpusError):
        transform_hardness_lift(Network.build([], [("p", PO, "q")]))


@settings(max_examples=40)
@given(st.integers(2, 5), st.integers(0, 10 ** 6))
def test_po_elimination_keeps_consistency_and_entails_input(m, seed):
    n = random_atomic_network(m, seed, EC | PO | TPP)
    out = transform_po_elimination(n)
    closed, trace = path_consistency(out, record=False)
    assert trace.consistent
    assert uses_only(out, EC | TPP | TPPI)
    for i, j in n.pairs():
        a, b = n.vars[i], n.vars[j]
        assert closed.mask(a, b) & ~n.mask(a, b) == 0


@settings(max_examples=40)
@given(st.integers(1, 5), st.integers(0, 10 ** 6))
def test_hardness_lift_keeps_consistency(m, seed):
    n = random_atomic_network(m, seed, EC | TPP | NTPP)
    out = transform_hardness_lift(n)
    assert len(out) == 3 * m + 2
    assert is_path_consistent(out)
    assert uses_only(out, EC | PP | PPI)
