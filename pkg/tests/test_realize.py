import os
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rcc_convex.algebra import ALL_MASK, DC, EC, EQ, NTPP, NTPPI, PO, TPP, TPPI
from rcc_convex.consistency import path_consistency
from rcc_convex.corpus import gen
from rcc_convex.geometry import box, interval
from rcc_convex.network import Network, NetworkError
from rcc_convex.oracle import random_atomic_network, realizable_1d
from rcc_convex.realize import (
    MAXIMAL_FRAGMENTS, STRATEGIES, DimensionNotAchieved, InconsistentNetworkError, Realization,
    atom_sets, classify_fragment, embed, fragment_bound, guaranteed_dim, is_valid, levels,
    lift_condition, lift_ntpp_dc, lift_weak_ec, maximal_oclique_ok, neighborly_cells, normalize_tree,
    rcc5_bound, realize, realize_1d_dc_ntpp, realize_1d_po, realize_1d_tpp, realize_2d_dc_pp,
    realize_2d_ec_pp, realize_2d_po_pp, realize_3d_ec_dc_ntpp, realize_3d_ec_dc_po,
    realize_4d_tree, realize_anchor_hulls, realize_boxes, realize_fragment, retry_budget, verify,
)
from rcc_convex.realize.search import A_INDEX, allen_of, box_cases, box_relation

R8_NO_EQ = ALL_MASK & ~EQ


def net(text):
    n = Network.build([], [tuple(line.split()) for line in text.strip().splitlines()])
    closed, trace = path_consistency(n)
    assert trace.consistent
    return closed


# -- verification ----------------------------------------------------------------------

def test_verify_reports_violations():
    n = Network.build([], [("a", EC, "b")])
    good = Realization(1, {"a": interval(0, 1), "b": interval(1, 2)})
    bad = Realization(1, {"a": interval(0, 1), "b": interval(2, 3)})
    assert verify(n, good).ok
    rep = verify(n, bad)
    assert not rep.ok and rep.violations[0].actual == DC
    assert verify(n, bad, weak=True).ok
    assert is_valid(n, good) and not is_valid(n, bad)
    with pytest.raises(NetworkError):
        verify(Network.build(["a", "z"]), good)


def test_oclique_common_part():
    # three pairwise overlapping strips with no common point
    a = box([0, 0], [2, 3])
    b = box([1, 0], [3, 1])
    c = box([1, 2], [3, 3])
    ok, bad = maximal_oclique_ok({"a": a, "b": b, "c": c})
    assert ok  # b and c are disjoint, so no triangle
    tri = {"a": box([0, 0], [2, 2]), "b": box([1, 1], [3, 3]), "c": box([1, 0], [2, 3])}
    assert maximal_oclique_ok(tri)[0]


def test_realization_json_roundtrip():
    r = Realization(2, {"a": box([0, 0], [1, Fraction(1, 3)])})
    assert Realization.from_json(r.to_json()).regions == r.regions


def test_levels():
    n = net("a NTPP b\nb NTPP c\nd TPP c")
    assert levels(n) == {"a": 1, "b": 2, "c": 3, "d": 1}


def test_fragment_table():
    assert fragment_bound(PO).bound == 1
    assert fragment_bound(DC | TPP).strategy == "planar_dc_pp"
    assert fragment_bound(EC | DC | PO).bound == 3
    assert fragment_bound(EC | DC | TPP).bound == 4
    assert fragment_bound(EC | PO | TPP).bound is None
    assert rcc5_bound(["PO", "PP"]) == 2
    assert rcc5_bound(["DR", "PO"]) == 3
    assert rcc5_bound(["DR", "PO", "PP"]) is None
    assert {s for _, _, s in MAXIMAL_FRAGMENTS} == set(STRATEGIES)


# -- fragment constructions -------------------------------------------------------------

CASES = [
    (realize_1d_po, "a PO b\nb PO c\na PO c", 1),
    (realize_1d_tpp, "a TPP b\nb TPP c\na TPP c", 1),
    (realize_1d_dc_ntpp, "a NTPP b\nc DC b\nd NTPPi c\nd DC b", 1),
    (realize_2d_dc_pp, "a TPP b\nc TPP b\na DC c\nd DC b", 2),
    (realize_2d_po_pp, "a PO b\nc TPP a\nc TPP b\nd PO a\nd PO b\nd PO c", 2),
    (realize_2d_ec_pp, "a EC b\nb EC c\na EC c\nd TPP a\nd EC b\nd EC c", 2),
    (realize_3d_ec_dc_po, "a EC b\nb EC c\na EC c\nd EC a\nd EC b\nd EC c", 3),
    (realize_3d_ec_dc_ntpp, "a EC b\nb EC c\na EC c\nd NTPP a", 3),
    (realize_4d_tree, "a EC b\nx TPP a\ny TPP a\nu TPP b\nv TPP b\nx DC y\nu DC v\n"
                      "x EC u\nx EC v\ny EC u\ny EC v", 4),
]


@pytest.mark.parametrize("fn,text,dim", CASES, ids=[c[0].__name__ for c in CASES])
def test_fragment_construction(fn, text, dim):
    n = net(text)
    r = fn(n)
    assert r.dim == dim
    assert verify(n, r).ok


def test_construction_rejects_wrong_fragment():
    with pytest.raises(NetworkError):
        realize_1d_po(net("a EC b"))


def test_aux_names_do_not_leak():
    n = gen("example1_theta2d")
    r = realize_4d_tree(n)
    assert set(r.regions) == set(n.vars)
    st_ = normalize_tree(n)
    assert any(v.startswith("__aux") for v in st_.parent)


def test_neighborly_cells_share_facets():
    from rcc_convex.geometry import shared_face_rank
    cells = neighborly_cells(5)
    assert all(shared_face_rank(cells[i], cells[j]) == 2 for i in range(5) for j in range(i + 1, 5))


@settings(max_examples=15)
@given(st.sampled_from(MAXIMAL_FRAGMENTS[:8]), st.integers(2, 5), st.integers(0, 10 ** 6))
def test_fragment_constructions_on_samples(frag, m, seed):
    mask, d, name = frag
    n = random_atomic_network(m, seed, mask)
    r = realize_fragment(n, d)
    assert r is not None and r.dim == d
    assert verify(n, r).ok


# -- lifting ----------------------------------------------------------------------------------

def test_chain_lift():
    n = net("""x NTPP y
u NTPP y
y NTPP z
x EC u
a1 NTPP a2
b1 NTPP b2
a2 DC b2
u EC a1
u PO a2
u PO b1
a1 NTPP y
y PO a2
y PO b1
a2 NTPP z
z PO b1
x TPP a1""")
    sub = n.restrict(["x", "y", "z", "u"])
    w = realizable_1d(sub)
    base = Realization(1, {v: interval(*w[v]) for v in sub.vars})
    r = lift_ntpp_dc(n, base, ["a1", "a2"], ["b1", "b2"])
    assert r.dim == 2 and verify(n, r).ok


def test_cone_lift_with_extra_region():
    n = net("x TPP y\nx EC z\ny PO z\nx EC u\ny PO u\nz PO u")
    sub = n.restrict(["x", "y", "z"])
    w = realizable_1d(sub, weak=True)
    base = Realization(1, {v: interval(*w[v]) for v in sub.vars}, weak=True)
    assert lift_condition(n, ["x", "y", "z"], "u") == "A"
    r = lift_weak_ec(n, base, "u")
    assert r.dim == 2 and verify(n, r).ok


def test_cone_lift_of_weak_triangle():
    n = gen("n3_1")
    w = realizable_1d(n, weak=True)
    base = Realization(1, {v: interval(*w[v]) for v in n.vars}, weak=True)
    r = lift_weak_ec(n, base)
    assert verify(n, r).ok


def test_embed_keeps_relations():
    n = net("a NTPP b\nb DC c")
    r = realize_1d_dc_ntpp(n)
    up = embed(n, r, 4)
    assert up.dim == 4 and verify(n, up).ok


# -- searches -----------------------------------------------------------------------------------

def test_allen_and_boxes():
    assert allen_of((0, 1), (1, 2)) == A_INDEX["m"]
    assert allen_of((0, 3), (1, 2)) == A_INDEX["di"]
    assert box_relation((A_INDEX["d"], A_INDEX["s"])) == TPP
    assert box_relation((A_INDEX["d"], A_INDEX["d"])) == NTPP
    assert box_relation((A_INDEX["o"], A_INDEX["e"])) == PO
    for rel in (DC, EC, PO, TPP, NTPP, TPPI, NTPPI, EQ):
        for cases in box_cases(rel, 2):
            assert cases


def test_box_search():
    n = gen("n3_2")
    r = realize_boxes(n, 2)
    assert r is not None and verify(n, r).ok


def test_anchor_hulls():
    n = net("a DC b\na NTPP c\nb NTPP c\nd PO c\nd DC a\nd DC b")
    assert atom_sets(n) is None  # d shares no minimal region with c
    n = net("a DC b\nc DC a\nb DC c\na TPP d\nb TPP d\na TPP e\nc TPP e\nd PO e\nc DC d\nb DC e")
    r = realize_anchor_hulls(n, 2)
    assert r is not None and verify(n, r).ok


# -- pipeline ---------------------------------------------------------------------------------

@settings(max_examples=10)
@given(st.integers(0, 10 ** 6))
def test_pipeline_five_variables_in_the_plane(seed):
    n = random_atomic_network(5, seed, R8_NO_EQ)
    r = realize(n, 2, seed=seed)
    assert r.dim == 2 and verify(n, r, check_common_part=False).ok


def test_pipeline_handles_eq_and_non_atomic_input():
    n = Network.build([], [("a", EQ, "b"), ("b", "PP", "c"), ("c", "DR", "d")])
    r = realize(n, 2)
    assert r.regions["a"] == r.regions["b"]
    closed, _ = path_consistency(n)
    rep = verify(closed.with_masks([[m for m in row] for row in closed.matrix()]), r,
                 check_common_part=False)
    assert all(actual & expected for expected, actual in rep.relations.values())


def test_pipeline_errors():
    bad = Network.build(["v1", "v2", "v3"], [("v1", TPP, "v2"), ("v2", PO, "v3"), ("v1", EQ, "v3")])
    with pytest.raises(InconsistentNetworkError):
        realize(bad)
    with pytest.raises(DimensionNotAchieved) as info:
        realize(gen("n3_1"), 1)
    assert info.value.target == 1
    assert info.value.achieved is not None and info.value.achieved.dim == 2


def test_guaranteed_dim():
    assert guaranteed_dim(net("a PO b")) == 1
    assert guaranteed_dim(gen("example1_theta2d")) == 4
    assert guaranteed_dim(random_atomic_network(7, 3, EC | PO | TPP)) >= 3


def test_retry_budget(monkeypatch):
    monkeypatch.delenv("RCC_CONVEX_RETRIES", raising=False)
    assert retry_budget() == 12
    assert retry_budget(3) == 3
    monkeypatch.setenv("RCC_CONVEX_RETRIES", "5")
    assert retry_budget() == 5


def test_classify_fragment_needs_atomic():
    with pytest.raises(NetworkError):
        classify_fragment(Network.build(["a", "b"]))
