from __future__ import annotations

import random
from fractions import Fraction

import pytest

import fixtures as F
import oracles
from mukai_kit.cohlat import (
    CohClass, GammaClass, NSClass, SurfaceData, cup, deg_twisted, euler_form, exp_class,
    from_gamma, integrate, mu_twisted, mukai_pairing, mukai_vector, sqrt_td, to_gamma, todd,
    twisted_chern,
)
from mukai_kit.errors import DimensionMismatch, NotDefined, NotIntegral, SignatureError


def all_surfaces():
    return F.k3_surfaces() + F.general_surfaces()


def test_signature_enforced():
    with pytest.raises(SignatureError):
        SurfaceData([[-2]])
    with pytest.raises(SignatureError):
        SurfaceData([[2, 0], [0, 2]])
    with pytest.raises(SignatureError):
        SurfaceData([[2, 1], [0, -2]])
    with pytest.raises(DimensionMismatch):
        SurfaceData([[2]], [0, 0])


def test_euler_form_matches_cup_definition_and_hand_expansion():
    rng = random.Random(0)
    for S in all_surfaces():
        for _ in range(100):
            x = F.random_rational_coh(S.rank, rng)
            y = F.random_rational_coh(S.rank, rng)
            by_cup = integrate(cup(cup(x.dual(), y, S), todd(S), S))
            assert euler_form(x, y, S) == by_cup
            hand = oracles.euler_by_hand(x.coords, y.coords, S.gram, S.canonical, S.chiO)
            assert euler_form(x, y, S) == hand


def test_euler_of_line_bundles():
    # chi(O, O(D)) = chiO + ((D^2) - (D, K)) / 2 by Riemann-Roch
    for S in all_surfaces():
        K = S.canonical_class
        O = from_gamma(GammaClass(1, [0] * S.rank, S.chiO), S)
        for D in ([1] + [0] * (S.rank - 1), [0] * (S.rank - 1) + [2], [1] * S.rank):
            D = NSClass(D)
            OD = exp_class(D, S)
            expected = S.chiO + (S.pair(D, D) - S.pair(D, K)) / 2
            assert euler_form(O, OD, S) == expected


def test_asymmetry_identity_with_riemann_roch_sign():
    # chi(x, y) - chi(y, x) = -(r_x c1(y) - r_y c1(x), K)
    rng = random.Random(3)
    for S in F.general_surfaces():
        K = S.canonical_class
        for _ in range(200):
            x, y = F.random_coh(S.rank, rng), F.random_coh(S.rank, rng)
            lhs = euler_form(x, y, S) - euler_form(y, x, S)
            assert lhs == -S.pair(y.c1 * x.r - x.c1 * y.r, K)


def test_euler_symmetric_on_k3():
    rng = random.Random(4)
    for S in F.k3_surfaces():
        for _ in range(50):
            x, y = F.random_coh(S.rank, rng), F.random_coh(S.rank, rng)
            assert euler_form(x, y, S) == euler_form(y, x, S)


def test_gamma_roundtrip_and_mukai_vector():
    rng = random.Random(5)
    for S in all_surfaces():
        for _ in range(50):
            g = GammaClass(rng.randint(-5, 5), [rng.randint(-5, 5) for _ in range(S.rank)], rng.randint(-5, 5))
            back = to_gamma(from_gamma(g, S), S)
            assert (back.rk, back.c1, back.chi) == (g.rk, g.c1, g.chi)
    S = SurfaceData([[2]])
    assert mukai_vector(GammaClass(1, [0], 2), S) == CohClass(1, [0], 1)
    with pytest.raises(NotDefined):
        mukai_vector(GammaClass(1, [0, 0], 1), F.rational_surface(1))
    with pytest.raises(NotIntegral):
        to_gamma(CohClass(1, [Fraction(1, 2)], 0), S)


def test_point_and_unit():
    for S in F.k3_surfaces():
        p = CohClass.point(S.rank)
        assert mukai_pairing(p, p, S) == 0
        assert mukai_pairing(CohClass.unit(S.rank), p, S) == -1
        assert sqrt_td(S) == CohClass(1, [0] * S.rank, 1)


def test_twisted_chern_of_trivial_twist():
    S = SurfaceData([[2, 0], [0, -2]])
    x = CohClass(2, [1, -1], 3)
    chG = CohClass(1, [0, 0], 0)
    assert twisted_chern(chG, x, S) == x
    with pytest.raises(NotDefined):
        twisted_chern(CohClass(1, [1, 0], 0), x, S)
    with pytest.raises(NotDefined):
        twisted_chern(CohClass(2, [0, 0], 0), x, S)


def test_twisted_degree_and_slope():
    S = SurfaceData([[2, 0], [0, -2]])
    H = NSClass([1, 0])
    vG = CohClass(2, [1, 0], 0)
    v = CohClass(1, [1, 1], 0)
    assert deg_twisted(vG, v, H, S) == (2 * 1 - 1 * 1) * 2
    assert mu_twisted(vG, v, H, S) == Fraction(2, 2)
    with pytest.raises(NotDefined):
        mu_twisted(vG, CohClass(0, [1, 0], 0), H, S)
    with pytest.raises(NotDefined):
        deg_twisted(CohClass(0, [1, 0], 0), v, H, S)


def test_dimension_checks():
    S = SurfaceData([[2]])
    with pytest.raises(DimensionMismatch):
        mukai_pairing(CohClass(1, [0, 0], 0), CohClass(1, [0], 0), S)
