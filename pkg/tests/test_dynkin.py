from __future__ import annotations

import itertools
import random

import pytest

import fixtures as F
import oracles
from mukai_kit.cohlat import CohClass, NSClass, SurfaceData
from mukai_kit.dynkin import (
    affine_label, cartan_matrix, classify_affine, classify_affine_cartan, classify_cartan_finite,
    classify_finite, disjointness_check, root_count, simple_system, singularity_report,
    tilting_check, tilting_witnesses,
)
from mukai_kit.errors import HypothesisViolation, KernelNotOneDimensional, NotADE, NotDefinite
from mukai_kit.roots import SubLattice, enumerate_roots

FINITE = ["A1", "A2", "A3", "A4", "A5", "D4", "D5", "D6", "E6", "E7", "E8"]


def lattice_of(c):
    n = len(c)
    return SubLattice(tuple(tuple(-x for x in row) for row in c),
                      tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), "ns")


@pytest.mark.parametrize("label", FINITE)
def test_simple_system_recovers_type(label):
    c = cartan_matrix(label)
    sub = lattice_of(c)
    rs = enumerate_roots(sub)
    assert len(rs) == root_count(label)
    simples = simple_system(rs)
    assert len(simples) == len(c)
    comps = classify_finite(simples, sub.gram)
    assert [l for _, l in comps] == [label]


@pytest.mark.parametrize("label", FINITE)
def test_classify_finite_is_permutation_invariant(label):
    rng = random.Random(label)
    c = cartan_matrix(label)
    n = len(c)
    for _ in range(5):
        p = list(range(n))
        rng.shuffle(p)
        cp = [[c[p[i]][p[j]] for j in range(n)] for i in range(n)]
        assert [l for _, l in classify_cartan_finite(cp)] == [label]


def test_disconnected_finite():
    a = cartan_matrix("A2")
    d = cartan_matrix("D4")
    n = 6
    c = [[0] * n for _ in range(n)]
    for i in range(2):
        for j in range(2):
            c[i][j] = a[i][j]
    for i in range(4):
        for j in range(4):
            c[2 + i][2 + j] = d[i][j]
    assert sorted(l for _, l in classify_cartan_finite(c)) == ["A2", "D4"]


def test_non_ade_rejected():
    with pytest.raises((NotADE, NotDefinite)):
        classify_cartan_finite(cartan_matrix("A~2"))
    with pytest.raises(KernelNotOneDimensional):
        classify_affine_cartan(cartan_matrix("E8"))
    with pytest.raises(NotADE):
        cartan_matrix("F4")


@pytest.mark.parametrize("label", ["A~1", "A~2", "A~5", "D~4", "D~6", "E~6", "E~7", "E~8"])
def test_affine_marks_match_sympy(label):
    res = classify_affine_cartan(cartan_matrix(label))
    assert res.label == label
    assert res.marks == oracles.sympy_kernel_primitive(cartan_matrix(label))


def test_affine_with_isotropic_relation():
    gram, v, decs = F.affine_configuration(["D4"])
    (dec,) = decs
    vectors = [x for _, x in dec]
    res = classify_affine(vectors, gram, v)
    assert res.label == "D~4" and res.multiple == 1
    with pytest.raises(HypothesisViolation):
        classify_affine(vectors, gram, tuple(2 * x + 1 for x in v))


def test_affine_kernel_dimension():
    c = [[2, -2, 0, 0], [-2, 2, 0, 0], [0, 0, 2, -2], [0, 0, -2, 2]]
    with pytest.raises((KernelNotOneDimensional, HypothesisViolation)):
        classify_affine_cartan(c)


def test_affine_label_names():
    assert affine_label("E8") == "E~8"
    assert affine_label("A1") == "A~1"


def test_disjointness_checks_hypotheses():
    gram, v, decs = F.affine_configuration(["A1", "A2"])
    d1, d2 = decs
    assert disjointness_check(d1, d2, gram) == "orthogonal"
    assert disjointness_check(d1, list(reversed(d1)), gram) == "equal"
    bad = [(1, d1[0][1])]
    with pytest.raises(HypothesisViolation):
        disjointness_check(d1, bad, gram)
    with pytest.raises(HypothesisViolation):
        disjointness_check([(2, x) for _, x in d1], [(2, x) for _, x in d2], gram)


def test_disjointness_generator_pairs():
    for V1, V2, g in F.disjointness_instances(seed=3, want=20):
        assert disjointness_check(V1, V2, g) in ("equal", "orthogonal")


def test_singularity_fixture_reports():
    for S, v0, H, labels in F.singularity_fixtures():
        rep = singularity_report(v0, H, S)
        assert rep.labels == sorted(labels)
        for comp in rep.components:
            assert comp.affine_label == affine_label(comp.label)
            assert comp.flags["relation_exact"]
            total = CohClass(0, [0] * S.rank, 0)
            for m, u in zip(comp.marks, comp.affine_nodes):
                total = total + u * m
            assert total == v0


def test_singularity_report_rejects_bad_v0():
    S = SurfaceData([[2, 0], [0, -8]])
    with pytest.raises(HypothesisViolation):
        singularity_report(CohClass(2, [-4, -3], -9), NSClass([1, 0]), S)
    with pytest.raises(HypothesisViolation):
        singularity_report(CohClass(4, [-8, -6], -20), NSClass([1, 0]), S)
    with pytest.raises(HypothesisViolation):
        singularity_report(CohClass(2, [-4, -3], -10), NSClass([0, 1]), S)


def test_tilting():
    S = SurfaceData([[2, 0], [0, -2]])
    H = NSClass([1, 0])
    # the (-2)-classes of H^perp are +-(0, 1)
    assert tilting_witnesses(2, NSClass([0, 2]), H, S) == [(0, -1), (0, 1)]
    assert tilting_check(4, NSClass([0, 1]), H, S)
    assert not tilting_check(1, NSClass([0, 1]), H, S)
    # rho = 1: H^perp = 0 has no (-2)-classes
    assert tilting_check(3, NSClass([5]), NSClass([1]), SurfaceData([[2]]))


def test_positive_functional_changes_simples_not_type():
    c = cartan_matrix("A3")
    sub = lattice_of(c)
    rs = enumerate_roots(sub)
    for f in itertools.product((-3, 1, 2), repeat=3):
        if any(sum(a * b for a, b in zip(f, r)) == 0 for r in rs):
            continue
        simples = simple_system(rs, f)
        assert [l for _, l in classify_finite(simples, sub.gram)] == ["A3"]
