from __future__ import annotations

import random
from fractions import Fraction

import pytest

import fixtures as F
from mukai_kit.cohlat import CohClass, NSClass, SurfaceData, deg_twisted, mukai_pairing
from mukai_kit.errors import HypothesisViolation
from mukai_kit.fmcoh import (
    FMIsometry, delta, fm_apply, fm_decompose, fm_inverse, fm_validate, make_isometry, reassemble,
)

S = SurfaceData([[2, 0], [0, -8]])
V0 = CohClass(2, [-4, -3], -10)
H = NSClass([1, 0])


def test_self_isometry_validates():
    val = fm_validate(make_isometry(S, V0, H))
    assert val.ok and val.first_failure is None
    # rank one: the matrix is integral and the degree gcds are compared
    val = fm_validate(make_isometry(S, CohClass(1, [0, 1], -4), H))
    assert val.ok and val.integral
    assert val.degree_gcds[0] == val.degree_gcds[1] > 0


def test_decomposition_reassembles():
    iso = make_isometry(S, V0, H)
    rng = random.Random(0)
    for _ in range(50):
        v = F.random_rational_coh(2, rng)
        dec = fm_decompose(v, iso)
        assert reassemble(dec, iso) == v
        assert S.pair(dec.D, H) == 0


def test_images_of_special_classes():
    for iso in F.fm_fixtures(count=4, seed=1):
        T = iso.target
        rho = iso.source.rank
        assert fm_apply(iso.v0, iso) == CohClass.point(T.rank)
        assert fm_apply(CohClass.point(rho), iso) == iso.w0
        assert fm_apply(delta(iso.H, iso.v0, iso.source), iso) == -delta(iso.Hhat, iso.w0, T)


def test_validation_reports_first_failure():
    iso = make_isometry(S, V0, H)
    bad = FMIsometry(S, V0, H, S, iso.w0, H, ((1, 0), (0, 2)))
    val = fm_validate(bad)
    assert not val.ok and val.first_failure == "theta is an isometry on H^perp"
    bad = FMIsometry(S, V0, H, S, CohClass(2, [4, 3], 11), H, iso.theta)
    assert fm_validate(bad).first_failure == "w0 isotropic"
    bad = FMIsometry(S, V0, H, S, iso.w0, H, ((1, 0),))
    assert fm_validate(bad).first_failure == "dimensions"


def test_inverse_roundtrip_and_twist():
    rng = random.Random(2)
    for iso in F.fm_fixtures(count=5, seed=2):
        inv = fm_inverse(iso)
        assert fm_validate(inv).ok
        for _ in range(20):
            v = F.random_coh(iso.source.rank, rng)
            assert fm_apply(fm_apply(v, iso), inv) == v
    twisted = make_isometry(S, V0, H, post_twist=NSClass([0, 1]))
    with pytest.raises(HypothesisViolation):
        fm_inverse(twisted)
    v = CohClass(1, [0, 0], 1)
    assert mukai_pairing(fm_apply(v, twisted), fm_apply(v, twisted), S) == mukai_pairing(v, v, S)


def test_degree_anti_preserved_for_defaults():
    iso = make_isometry(S, V0, H)
    rng = random.Random(3)
    for _ in range(50):
        v = F.random_coh(2, rng)
        assert deg_twisted(V0, v, H, S) == -deg_twisted(iso.w0, fm_apply(v, iso), H, S)


def test_delta_needs_rank():
    with pytest.raises(HypothesisViolation):
        delta(H, CohClass(0, [1, 0], 0), S)
    assert delta(NSClass([0, 1]), V0, S) == CohClass(0, [0, 1], Fraction(24, 2))
