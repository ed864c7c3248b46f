"""Deterministic generators of surfaces, classes, lattices and isometries for tests."""

from __future__ import annotations

import random
from fractions import Fraction

from mukai_kit import linalg
from mukai_kit.cohlat import CohClass, NSClass, SurfaceData
from mukai_kit.dynkin import cartan_matrix
from mukai_kit.fmcoh import FMIsometry, fm_validate
from mukai_kit.roots import ns_perp

K3_GRAMS = [
    [[2]],
    [[2, 0], [0, -2]],
    [[0, 1], [1, 0]],
    [[2, 0], [0, -8]],
    [[4, 0, 0], [0, -2, 1], [0, 1, -2]],
    [[2, 0, 0], [0, -2, 0], [0, 0, -2]],
    [[2, 0, 0, 0], [0, -2, 1, 0], [0, 1, -2, 1], [0, 0, 1, -2]],
    [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, -2, 1], [0, 0, 1, -2]],
]


def k3_surfaces() -> list[SurfaceData]:
    return [SurfaceData(g) for g in K3_GRAMS]


def rational_surface(k: int) -> SurfaceData:
    """P^2 blown up in k points: <1> + <-1>^k, K = -3h + sum e_i, chi(O) = 1."""
    n = k + 1
    gram = [[(1 if i == 0 else -1) if i == j else 0 for j in range(n)] for i in range(n)]
    return SurfaceData(gram, [-3] + [1] * k, 1)


def general_surfaces() -> list[SurfaceData]:
    """Surfaces with K != 0."""
    out = [rational_surface(k) for k in (0, 1, 2, 3)]
    # F_0 = P^1 x P^1 with K = (-2, -2) on the hyperbolic plane
    out.append(SurfaceData([[0, 1], [1, 0]], [-2, -2], 1))
    # a surface with chi(O) = 0 and K a multiple of a fibre class
    out.append(SurfaceData([[0, 1], [1, -2]], [2, 0], 0))
    return out


def random_unimodular(n: int, rng: random.Random, steps: int = 6) -> list[list[int]]:
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    if n == 1:
        return [[rng.choice((1, -1))]]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        c = rng.choice((-2, -1, 1, 2))
        for row in m:
            row[i] += c * row[j]
        if rng.random() < 0.3:
            for row in m:
                row[i] = -row[i]
    return m


def random_coh(rho: int, rng: random.Random, bound: int = 6) -> CohClass:
    return CohClass(rng.randint(-bound, bound), [rng.randint(-bound, bound) for _ in range(rho)],
                    rng.randint(-bound, bound))


def random_rational_coh(rho: int, rng: random.Random, bound: int = 6, den: int = 6) -> CohClass:
    def q():
        return Fraction(rng.randint(-bound * den, bound * den), rng.randint(1, den))

    return CohClass(q(), [q() for _ in range(rho)], q())


def ample_class(S: SurfaceData) -> NSClass:
    """A small class with positive square; fixed choice per Gram matrix."""
    rho = S.rank
    cands = []
    for i in range(rho):
        for j in range(rho):
            v = [0] * rho
            v[i] += 1
            v[j] += 1 if i != j else 0
            cands.append(v)
    for v in cands:
        h = NSClass(v)
        if S.pair(h, h) > 0:
            return h
    raise AssertionError("no small positive class")


def random_root(S: SurfaceData, rng: random.Random, bound: int = 3) -> CohClass:
    """A (-2)-class of the Mukai lattice: v(O(D)) = (1, D, D^2/2 + 1), moved by reflections."""
    from mukai_kit.weyl import reflect

    rho = S.rank
    while True:
        D = NSClass([rng.randint(-bound, bound) for _ in range(rho)])
        if S.pair(D, D) % 2 == 0:
            break
    u = CohClass(1, D, S.pair(D, D) / 2 + 1)
    for _ in range(rng.randint(0, 2)):
        E = NSClass([rng.randint(-2, 2) for _ in range(rho)])
        if S.pair(E, E) % 2:
            continue
        w = CohClass(1, E, S.pair(E, E) / 2 + 1)
        u = reflect(u, w, S)
    return u


def isotropic_vectors(S: SurfaceData, max_rank: int = 4, bound: int = 3) -> list[CohClass]:
    """Primitive integral isotropic (r, xi, s) with 0 < r <= max_rank and |xi_i| <= bound."""
    import itertools

    out = []
    for r in range(1, max_rank + 1):
        for xi in itertools.product(range(-bound, bound + 1), repeat=S.rank):
            x = NSClass(xi)
            s = S.pair(x, x) / (2 * r)
            if s.denominator != 1:
                continue
            v = CohClass(r, x, s)
            if v.is_primitive():
                out.append(v)
    return out


def perp_minus_two(H: NSClass, S: SurfaceData, bound: int = 3) -> list[NSClass]:
    import itertools

    P = ns_perp(H, S)
    out = []
    for c in itertools.product(range(-bound, bound + 1), repeat=P.rank):
        D = NSClass(P.vector(c)) if P.rank else None
        if D is not None and S.pair(D, D) == -2:
            out.append(D)
    return out


def fm_fixtures(count: int = 12, seed: int = 7) -> list[FMIsometry]:
    """Validated isometries onto a change of basis of the source.

    With P unimodular, S' has Gram P^T G P; theta = P^-1, optionally after a
    reflection in a (-2)-class of H^perp; w0 = (r0, -P^-1 xi0, a0), Hhat = P^-1 H.
    """
    rng = random.Random(seed)
    out = []
    grams = K3_GRAMS[1:]
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 2000:
            raise AssertionError("could not build enough FM fixtures")
        S = SurfaceData(rng.choice(grams))
        rho = S.rank
        H = ample_class(S)
        vs = [v for v in isotropic_vectors(S, 3, 2) if v.r >= 1]
        v0 = rng.choice(vs)
        P = random_unimodular(rho, rng)
        Pinv = linalg.inverse(P)
        T = S.change_basis(P)
        theta = [list(r) for r in Pinv]
        roots = perp_minus_two(H, S, 2)
        if roots and rng.random() < 0.6:
            D = rng.choice(roots)
            gd = linalg.mat_vec(S.gram, list(D.coords))
            refl = [[Fraction(int(i == j)) + D.coords[i] * gd[j] for j in range(rho)] for i in range(rho)]
            theta = linalg.mat_mul(theta, refl)
        xi_hat = NSClass(linalg.mat_vec(Pinv, list((-v0.c1).coords)))
        w0 = CohClass(v0.r, xi_hat, v0.s)
        Hh = NSClass(linalg.mat_vec(Pinv, list(H.coords)))
        iso = FMIsometry(S, v0, H, T, w0, Hh, tuple(tuple(r) for r in theta))
        if fm_validate(iso).ok:
            out.append(iso)
    return out


# -- abstract lattices with an isotropic radical ---------------------------

def affine_configuration(labels: list[str]):
    """Gram of Z v + R_1 + ... + R_k (v radical, R_i negative definite) and the
    standard affine simple systems: nodes (finite simples, v - highest root).

    Returns (gram, v, decompositions) with decompositions a list of
    [(mark, vector)] summing to v, one per component.
    """
    from mukai_kit.dynkin import affine_marks
    from mukai_kit.weyl import positive_root_coeffs

    blocks = [cartan_matrix(l) for l in labels]
    n = 1 + sum(len(b) for b in blocks)
    gram = [[0] * n for _ in range(n)]
    offs = 1
    decs = []
    v = [1] + [0] * (n - 1)
    for c in blocks:
        m = len(c)
        for i in range(m):
            for j in range(m):
                gram[offs + i][offs + j] = -c[i][j]
        highest = positive_root_coeffs(c)[-1]
        simples = []
        for i in range(m):
            e = [0] * n
            e[offs + i] = 1
            simples.append(e)
        theta = [sum(h * s[k] for h, s in zip(highest, simples)) for k in range(n)]
        a0 = [vk - t for vk, t in zip(v, theta)]
        nodes = [a0] + simples
        aff_c = [[-linalg.bilinear(x, gram, y) for y in nodes] for x in nodes]
        marks = affine_marks(aff_c)
        decs.append([(mk, tuple(x)) for mk, x in zip(marks, nodes)])
        offs += m
    return gram, tuple(v), decs


def weyl_image(dec, gram, rng: random.Random, steps: int = 3):
    """Image of a decomposition under random reflections in finite roots (fixing v)."""
    vecs = [list(x) for _, x in dec]
    for _ in range(steps):
        r = list(rng.choice(vecs[1:]))  # a finite simple root of this component
        new = []
        for x in vecs:
            p = linalg.bilinear(x, gram, r)
            new.append([a + p * b for a, b in zip(x, r)])
        vecs = new
    return [(mk, tuple(int(a) for a in x)) for (mk, _), x in zip(dec, vecs)]


def disguise(gram, decs, rng: random.Random):
    """Transport everything by a random unimodular change of coordinates."""
    n = len(gram)
    P = random_unimodular(n, rng)
    Pinv = linalg.inverse(P)
    g2 = [[int(x) for x in row] for row in linalg.congruent(P, gram)]

    def tr(x):
        return tuple(int(a) for a in linalg.mat_vec(Pinv, list(x)))

    return g2, [[(mk, tr(x)) for mk, x in d] for d in decs]


def disjointness_instances(seed: int = 11, want: int = 60):
    """Pairs (V1, V2, gram) of decompositions of the same primitive isotropic v."""
    from mukai_kit.dynkin import disjointness_check
    from mukai_kit.errors import HypothesisViolation

    rng = random.Random(seed)
    configs = [["A1", "A1"], ["A2", "A1"], ["A3", "A2"], ["D4", "A1"], ["A1", "A2", "A3"],
               ["D5", "A2"], ["E6", "A1"], ["A4"], ["D4"], ["E7", "A1"]]
    out = []
    tries = 0
    while len(out) < want:
        tries += 1
        if tries > 5000:
            raise AssertionError("generator exhausted")
        labels = rng.choice(configs)
        gram, v, decs = affine_configuration(labels)
        cand = list(decs)
        cand += [weyl_image(d, gram, rng, rng.randint(1, 4)) for d in decs]
        gram2, cand = disguise(gram, cand, rng)
        V1, V2 = rng.choice(cand), rng.choice(cand)
        try:
            disjointness_check(V1, V2, gram2)
        except HypothesisViolation:
            continue
        out.append((V1, V2, gram2))
    return out


# -- alcoves ---------------------------------------------------------------

def alcove_configuration(labels: list[str]):
    """NS = <2> + R_1(-1) + ...; one block per R_i on its standard simples."""
    from mukai_kit.weyl import make_block

    blocks_c = [cartan_matrix(l) for l in labels]
    n = 1 + sum(len(b) for b in blocks_c)
    gram = [[0] * n for _ in range(n)]
    gram[0][0] = 2
    offs = 1
    spans = []
    for c in blocks_c:
        m = len(c)
        for i in range(m):
            for j in range(m):
                gram[offs + i][offs + j] = -c[i][j]
        spans.append(range(offs, offs + m))
        offs += m
    S = SurfaceData(gram)
    blocks = []
    for sp in spans:
        simples = [NSClass([int(k == i) for k in range(n)]) for i in sp]
        blocks.append(make_block(simples, S))
    return S, blocks


# -- singularities ---------------------------------------------------------

SINGULARITY_FIXTURES = [
    # (gram, v0, H, expected finite labels)
    ([[2]], (1, [1], 1), [1], []),
    ([[2]], (4, [2], 1), [1], []),
    ([[2, 0], [0, -8]], (2, [-4, -3], -10), [1, 0], ["A1"]),
    ([[2, 0], [0, -8]], (2, [-4, -1], 6), [1, 0], ["A1"]),
    ([[4, 0], [0, -8]], (2, [-4, -3], -2), [1, 0], ["A1"]),
    ([[2, 0], [0, -18]], (3, [-3, -2], -9), [1, 0], ["A1"]),
    ([[2, 0, 0], [0, -2, 0], [0, 0, -2]], (5, [0, -4, -3], -5), [1, 0, 0], ["A1", "A1"]),
    ([[2, 0, 0], [0, -2, 1], [0, 1, -2]], (4, [-4, -4, -2], 1), [1, 0, 0], ["A2"]),
    ([[2, 0, 0], [0, -2, 0], [0, 0, -8]], (2, [-4, -4, -3], -18), [1, 0, 0], ["A1", "A1"]),
]


def singularity_fixtures():
    out = []
    for gram, (r, xi, s), H, labels in SINGULARITY_FIXTURES:
        S = SurfaceData(gram)
        out.append((S, CohClass(r, xi, s), NSClass(H), labels))
    return out


def basis_change(S: SurfaceData, v0: CohClass, H: NSClass, P):
    Pinv = linalg.inverse(P)
    T = S.change_basis(P)
    v = CohClass(v0.r, linalg.mat_vec(Pinv, list(v0.c1.coords)), v0.s)
    return T, v, NSClass(linalg.mat_vec(Pinv, list(H.coords)))
