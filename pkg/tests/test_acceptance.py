"""The ten acceptance criteria, each with its time limit.

Every test records one pass/fail line; the lines are printed in the
"acceptance criteria" section of the pytest summary.
"""
import time

import pytest

from conftest import ACCEPTANCE
from rcc_convex.algebra import (
    ALL_MASK, EC, EQ, NTPP, NTPPI, PO, TPP, TPPI, Base, compose_mask, converse_mask,
)
from rcc_convex.consistency import is_path_consistent
from rcc_convex.corpus import (
    PP, PPI, gen, transform_hardness_lift, transform_po_elimination, uses_only,
)
from rcc_convex.geometry import moment_point, poly_derivative, poly_value, quartic_hyperplane, shared_face_rank
from rcc_convex.network import isomorphic
from rcc_convex.oracle import classify_1d_gap, enumerate_atomic, random_atomic_network
from rcc_convex.realize import (
    MAXIMAL_FRAGMENTS, DimensionNotAchieved, neighborly_cells, realize, realize_fragment, verify,
)

R8_NO_EQ = ALL_MASK & ~EQ


def record(k: int, ok: bool, msg: str) -> None:
    ACCEPTANCE[k] = (ok, msg)


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def test_criterion_01_composition_coherence():
    with Timer() as t:
        bad = []
        for r in Base:
            for s in Base:
                if r == Base.EQ or s == Base.EQ:
                    continue
                cell = compose_mask(r.bit, s.bit)
                flipped = compose_mask(converse_mask(s.bit), converse_mask(r.bit))
                if converse_mask(cell) != flipped or cell & ~ALL_MASK or not cell:
                    bad.append((r.label, s.label))
    ok = not bad and t.elapsed < 1
    record(1, ok, f"49 pairs coherent, {len(bad)} bad, {t.elapsed:.3f}s (< 1s)")
    assert not bad
    assert t.elapsed < 1


def test_criterion_02_three_variable_gap():
    with Timer() as t:
        classes = classify_1d_gap(3, R8_NO_EQ, weak=False)
    matched = sorted(
        name for name in ("n3_1", "n3_2") if any(isomorphic(c, gen(name)) for c in classes)
    )
    ok = len(classes) == 2 and matched == ["n3_1", "n3_2"] and t.elapsed < 5
    record(2, ok, f"{len(classes)} classes, matched {matched}, {t.elapsed:.2f}s (< 5s)")
    assert len(classes) == 2
    assert matched == ["n3_1", "n3_2"]
    assert t.elapsed < 5


def test_criterion_03_four_variable_weak_gap():
    with Timer() as t:
        classes = classify_1d_gap(4, EC | PO | TPP | TPPI, weak=True)
    with_ec = sum(1 for c in classes if c.used_relations() & EC)
    ok = len(classes) == 3 and with_ec == 3 and t.elapsed < 60
    record(3, ok, f"{len(classes)} classes, {with_ec} with EC, {t.elapsed:.2f}s (< 60s)")
    assert len(classes) == 3
    assert with_ec == 3
    assert t.elapsed < 60


def test_criterion_04_no_weak_gap_without_ec():
    with Timer() as t:
        classes = classify_1d_gap(4, PO | TPP | TPPI, weak=True)
    ok = not classes and t.elapsed < 30
    record(4, ok, f"{len(classes)} classes, {t.elapsed:.2f}s (< 30s)")
    assert classes == []
    assert t.elapsed < 30


def _fragment_run(frag: int, d: int, four_d: bool):
    failures = []
    count = 0
    for m in range(1, 5):
        for n in enumerate_atomic(m, frag):
            count += 1
            r = realize_fragment(n, d)
            if r is None or r.dim != d or not verify(n, r).ok:
                failures.append(("exhaustive", m, n.to_text()))
    sizes = (5,) if four_d else (5, 6)
    for k in range(200):
        m = sizes[k % len(sizes)]
        n = random_atomic_network(m, k, frag)
        count += 1
        r = realize_fragment(n, d)
        if r is None or r.dim != d or not verify(n, r).ok:
            failures.append(("sample", k, n.to_text()))
    return count, failures


@pytest.mark.slow
def test_criterion_05_fragment_suite():
    lines = []
    all_ok = True
    for frag, d, name in MAXIMAL_FRAGMENTS:
        four_d = d == 4
        with Timer() as t:
            count, failures = _fragment_run(frag, d, four_d)
        limit = 20 * 60 if four_d else 10 * 60
        ok = not failures and t.elapsed < limit
        all_ok &= ok
        lines.append(f"{name}: {count} nets, {len(failures)} failed, {t.elapsed:.1f}s")
    record(5, all_ok, "; ".join(lines))
    assert all_ok, lines


def test_criterion_06_neighborly_cells():
    with Timer() as t:
        cells = neighborly_cells(6, 3, params=range(1, 7))
        ranks = {shared_face_rank(cells[i], cells[j]) for i in range(6) for j in range(i + 1, 6)}
    sites_ok = all(all(x > 0 for x in moment_point(s, 3)) for s in range(1, 7))
    ok = ranks == {2} and sites_ok and t.elapsed < 10
    record(6, ok, f"shared face ranks {sorted(ranks)}, {t.elapsed:.2f}s (< 10s)")
    assert ranks == {2}
    assert t.elapsed < 10


def test_criterion_07_quartic_hyperplane():
    import random
    from fractions import Fraction
    rng = random.Random(7)
    bad = 0
    with Timer() as t:
        for _ in range(100):
            vals = set()
            while len(vals) < 4:
                vals.add(Fraction(rng.randint(-400, 400), rng.randint(1, 40)))
            m1, t1, t2, m2 = sorted(vals)
            hp = quartic_hyperplane(m1, t1, t2, m2)
            residuals = (poly_value(hp, t1), poly_value(hp, t2),
                         poly_derivative(hp, m1), poly_derivative(hp, m2), hp.normal[3] - 1)
            bad += any(r != 0 for r in residuals)
    ok = bad == 0 and t.elapsed < 10
    record(7, ok, f"{100 - bad}/100 exact, {t.elapsed:.2f}s (< 10s)")
    assert bad == 0
    assert t.elapsed < 10


@pytest.mark.slow
def test_criterion_08_small_networks_in_low_dimension():
    bad = []
    with Timer() as t:
        for k in range(100):
            n = random_atomic_network(5, 1000 + k, R8_NO_EQ)
            r = realize(n, 2)
            if r.dim != 2 or not verify(n, r, check_common_part=False).ok:
                bad.append((5, k))
        for k in range(50):
            n = random_atomic_network(7, 2000 + k, R8_NO_EQ)
            r = realize(n, 3)
            if r.dim != 3 or not verify(n, r, check_common_part=False).ok:
                bad.append((7, k))
    ok = not bad and t.elapsed < 15 * 60
    record(8, ok, f"100 x 5 vars in R^2 and 50 x 7 vars in R^3, {len(bad)} failed, {t.elapsed:.1f}s (< 900s)")
    assert not bad
    assert t.elapsed < 15 * 60


@pytest.mark.slow
def test_criterion_09_corpus():
    instances = [
        ("example1_theta2d", {}), ("theta3d", {}), ("theta_nd", {"n": 4}), ("theta_nd", {"n": 5}),
        ("k33_po", {"variant": "dr"}), ("k33_po", {"variant": "dc"}), ("k33_po", {"variant": "ec"}),
        ("k33_ec", {}), ("radon", {"n": 1}), ("radon", {"n": 2}), ("ec_tpp_square", {}),
        ("tpp_ntpp_chain", {}), ("n3_1", {}), ("n3_2", {}),
        ("po_pp_hexagon", {"variant": "pp"}), ("po_pp_hexagon", {"variant": "tpp"}),
        ("po_pp_hexagon", {"variant": "ntpp"}),
    ]
    with Timer() as t:
        not_pc = [name for name, kw in instances if not is_path_consistent(gen(name, **kw))]
        theta = gen("example1_theta2d")
        failed_2d = False
        try:
            realize(theta, 2)
        except DimensionNotAchieved:
            failed_2d = True
        r3 = realize(theta, 3)
        ok3 = r3.dim == 3 and verify(theta, r3, check_common_part=False).ok
    ok = not not_pc and failed_2d and ok3 and t.elapsed < 5 * 60
    record(9, ok, f"{len(instances) - len(not_pc)}/{len(instances)} path-consistent, "
                  f"2D budget failed={failed_2d}, R^3 verified={ok3}, {t.elapsed:.1f}s (< 300s)")
    assert not not_pc
    assert failed_2d
    assert ok3
    assert t.elapsed < 5 * 60


def test_criterion_10_transforms():
    report = []
    with Timer() as t:
        po_inputs = enumerate_atomic(3, EC | PO | TPP | TPPI)
        po_bad = 0
        for n in po_inputs:
            out = transform_po_elimination(n)
            if is_path_consistent(out) != is_path_consistent(n) or not uses_only(out, EC | TPP | TPPI):
                po_bad += 1
        lift_inputs = enumerate_atomic(3, EC | TPP | NTPP | TPPI | NTPPI)
        lift_bad = 0
        for n in lift_inputs:
            out = transform_hardness_lift(n)
            if is_path_consistent(out) != is_path_consistent(n) or not uses_only(out, EC | PP | PPI):
                lift_bad += 1
    report.append(f"PO elimination {len(po_inputs) - po_bad}/{len(po_inputs)}")
    report.append(f"hardness lift {len(lift_inputs) - lift_bad}/{len(lift_inputs)}")
    ok = po_bad == 0 and lift_bad == 0 and t.elapsed < 120
    record(10, ok, ", ".join(report) + f", {t.elapsed:.2f}s (< 120s)")
    assert po_bad == 0 and lift_bad == 0
    assert t.elapsed < 120
