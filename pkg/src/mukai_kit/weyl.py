"""Reflections and translations on the Mukai lattice, alcoves and their reduction.

Matrices act on coordinates (r, c1, s) from the left. A word is applied left
to right: ``[g1, g2]`` is the map ``g2 o g1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import floor
from typing import Sequence, Union

from . import linalg
from .cohlat import CohClass, NSClass, SurfaceData, cup, exp_class, mukai_pairing
from .errors import HypothesisViolation, IdentityFailure, OnWall, WordTooLong, WrongNorm

Matrix = list[list[Fraction]]


@dataclass(frozen=True)
class Refl:
    u: CohClass


@dataclass(frozen=True)
class Trans:
    D: NSClass


WeylGen = Union[Refl, Trans]


def reflect(v: CohClass, u: CohClass, S: SurfaceData) -> CohClass:
    """v + <v, u> u for a (-2)-class u."""
    if mukai_pairing(u, u, S) != -2:
        raise WrongNorm("reflection class must have <u, u> = -2")
    return v + u * mukai_pairing(v, u, S)


def translate(v: CohClass, D: NSClass, S: SurfaceData) -> CohClass:
    """v . e^D."""
    return cup(v, exp_class(D, S), S)


def refl_matrix(u: CohClass, S: SurfaceData) -> Matrix:
    if mukai_pairing(u, u, S) != -2:
        raise WrongNorm("reflection class must have <u, u> = -2")
    uc = list(u.coords)
    ju = linalg.mat_vec(S.mukai_gram(), uc)
    n = len(uc)
    return [[Fraction(int(i == j)) + uc[i] * ju[j] for j in range(n)] for i in range(n)]


def trans_matrix(D: NSClass, S: SurfaceData) -> Matrix:
    rho = S.rank
    n = rho + 2
    m = linalg.identity(n)
    gd = linalg.mat_vec(S.gram, list(D.coords))
    for k in range(rho):
        m[k + 1][0] = D.coords[k]
        m[n - 1][k + 1] = gd[k]
    m[n - 1][0] = S.pair(D, D) / 2
    return m


def gen_matrix(g: WeylGen, S: SurfaceData) -> Matrix:
    return refl_matrix(g.u, S) if isinstance(g, Refl) else trans_matrix(g.D, S)


@dataclass(frozen=True)
class WeylWord:
    gens: tuple[WeylGen, ...]
    surface: SurfaceData

    def __init__(self, gens: Sequence[WeylGen], surface: SurfaceData):
        object.__setattr__(self, "gens", tuple(gens))
        object.__setattr__(self, "surface", surface)

    @cached_property
    def matrix(self) -> tuple[tuple[Fraction, ...], ...]:
        """Matrix of the composite, built on first use."""
        m = linalg.identity(self.surface.rank + 2)
        for g in self.gens:
            m = linalg.mat_mul(gen_matrix(g, self.surface), m)
        return tuple(tuple(row) for row in m)

    def __len__(self) -> int:
        return len(self.gens)

    def __add__(self, other: "WeylWord") -> "WeylWord":
        return WeylWord(self.gens + other.gens, self.surface)

    def inverse(self) -> "WeylWord":
        inv = []
        for g in reversed(self.gens):
            inv.append(g if isinstance(g, Refl) else Trans(-g.D))
        return WeylWord(inv, self.surface)


def apply_matrix(m: Sequence[Sequence], v: CohClass) -> CohClass:
    return CohClass.from_coords(linalg.mat_vec(m, list(v.coords)))


def apply_word(w: WeylWord, v: CohClass) -> CohClass:
    S = w.surface
    checked: set[CohClass] = set()
    out = v
    for g in w.gens:
        if isinstance(g, Refl):
            if g.u not in checked:
                if mukai_pairing(g.u, g.u, S) != -2:
                    raise WrongNorm("reflection class must have <u, u> = -2")
                checked.add(g.u)
            out = out + g.u * mukai_pairing(out, g.u, S)
        else:
            out = translate(out, g.D, S)
    return out


def preserves_pairing(m: Sequence[Sequence], S: SurfaceData) -> bool:
    j = S.mukai_gram()
    return linalg.congruent(m, j) == j


# -- alcoves ---------------------------------------------------------------

@dataclass(frozen=True)
class Membership:
    inside: bool
    on_wall: bool

    def __bool__(self) -> bool:
        return self.inside


@dataclass(frozen=True)
class Block:
    """Simple (-2)-curves of one singular fibre with the marks of the highest root.

    ``Z = sum marks_j C_j``; the affine wall is (alpha, Z) = 1.
    """

    simples: tuple[NSClass, ...]
    marks: tuple[int, ...]

    def Z(self) -> NSClass:
        z = NSClass.zero(len(self.simples[0]))
        for m, c in zip(self.marks, self.simples):
            z = z + c * m
        return z


def _cartan_ns(simples: Sequence[NSClass], S: SurfaceData) -> list[list[int]]:
    return [[-int(S.pair(a, b)) for b in simples] for a in simples]


def positive_root_coeffs(cartan: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Positive roots of a finite simply laced system in simple-root coordinates."""
    n = len(cartan)
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    found = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for beta in frontier:
            for i in range(n):
                # <beta, alpha_i^vee> via the Cartan matrix
                c = sum(beta[j] * cartan[j][i] for j in range(n))
                if c < 0:
                    new = tuple(b + (-c if k == i else 0) for k, b in enumerate(beta))
                    if new not in found:
                        found.add(new)
                        nxt.append(new)
        frontier = nxt
    return sorted(found, key=lambda b: (sum(b), b))


def make_block(simples: Sequence[NSClass], S: SurfaceData) -> Block:
    """Block with marks equal to the coefficients of the highest root."""
    cartan = _cartan_ns(simples, S)
    from .dynkin import classify_cartan_finite

    comps = classify_cartan_finite(cartan)
    if len(comps) != 1:
        raise HypothesisViolation("block simples must form a connected diagram")
    highest = positive_root_coeffs(cartan)[-1]
    return Block(tuple(simples), tuple(highest))


def block_positive_roots(block: Block, S: SurfaceData) -> list[NSClass]:
    return list(_block_positive_roots(block, S))


@lru_cache(maxsize=256)
def _block_positive_roots(block: Block, S: SurfaceData) -> tuple[NSClass, ...]:
    out = []
    for coeffs in positive_root_coeffs(_cartan_ns(block.simples, S)):
        z = NSClass.zero(S.rank)
        for m, c in zip(coeffs, block.simples):
            z = z + c * m
        out.append(z)
    return tuple(out)


def in_fund_chamber(alpha: NSClass, simples: Sequence[NSClass], S: SurfaceData) -> Membership:
    vals = [S.pair(alpha, c) for c in simples]
    return Membership(all(x > 0 for x in vals), any(x == 0 for x in vals))


def in_fund_alcove(alpha: NSClass, simples: Sequence[NSClass], Z: Sequence[NSClass],
                   S: SurfaceData) -> Membership:
    """(alpha, C) > 0 for every simple C and (alpha, Z_i) < 1 for every Z_i."""
    vals = [S.pair(alpha, c) for c in simples]
    zvals = [S.pair(alpha, z) for z in Z]
    inside = all(x > 0 for x in vals) and all(x < 1 for x in zvals)
    on_wall = any(x == 0 for x in vals) or any(x == 1 for x in zvals)
    return Membership(inside, on_wall)


def affine_walls_hit(alpha: NSClass, blocks: Sequence[Block], S: SurfaceData) -> list[NSClass]:
    """Positive roots beta of the blocks with (alpha, beta) an integer."""
    return [b for blk in blocks for b in block_positive_roots(blk, S)
            if S.pair(alpha, b).denominator == 1]


def default_length_bound(alpha: NSClass, blocks: Sequence[Block], S: SurfaceData) -> int:
    """Twice the number of affine hyperplanes that can separate alpha from the alcove."""
    total = 0
    for blk in blocks:
        for b in block_positive_roots(blk, S):
            total += floor(abs(S.pair(alpha, b))) + 1
    return 2 * total


def datum(alpha: NSClass, S: SurfaceData) -> CohClass:
    """e^alpha: the Mukai-lattice datum moved by the reduction word."""
    return exp_class(alpha, S)


def alcove_reduce(alpha: NSClass, blocks: Sequence[Block], S: SurfaceData,
                  max_length: int | None = None) -> tuple[WeylWord, NSClass]:
    """Word moving e^alpha into the fundamental alcove, and the reduced alpha.

    Violated inequalities are fixed in a fixed order: simple walls block by
    block, then affine walls. An affine wall is crossed with the pair
    [Refl((0, Z, 0)), Trans(-Z)], which sends e^alpha to e^(alpha + ((alpha,Z)-1)Z).
    """
    hits = affine_walls_hit(alpha, blocks, S)
    if hits:
        raise OnWall(f"alpha lies on an affine wall of the root {hits[0].coords}")
    bound = default_length_bound(alpha, blocks, S) if max_length is None else max_length
    simples = [c for blk in blocks for c in blk.simples]
    spans = []
    k = 0
    for blk in blocks:
        spans.append(range(k, k + len(blk.simples)))
        k += len(blk.simples)
    g = [[int(S.pair(a, b)) for b in simples] for a in simples]
    # alpha = alpha_start + sum coeff_j C_j; p_j = (alpha, C_j) kept up to date
    p = [S.pair(alpha, c) for c in simples]
    coeff = [Fraction(0)] * len(simples)
    gens: list[WeylGen] = []

    def shift(j: int, t: Fraction) -> None:
        coeff[j] += t
        row = g[j]
        for i in range(len(p)):
            if row[i]:
                p[i] += t * row[i]

    while True:
        j = next((i for i in range(len(p)) if p[i] < 0), None)
        if j is not None:
            gens.append(Refl(CohClass(0, simples[j], 0)))
            shift(j, p[j])
        else:
            b = None
            for bi, blk in enumerate(blocks):
                z = sum(m * p[i] for m, i in zip(blk.marks, spans[bi]))
                if z > 1:
                    b = bi
                    break
            if b is None:
                break
            blk = blocks[b]
            zc = blk.Z()
            gens.append(Refl(CohClass(0, zc, 0)))
            gens.append(Trans(-zc))
            t = z - 1
            for m, i in zip(blk.marks, spans[b]):
                shift(i, t * m)
        if len(gens) > bound:
            raise WordTooLong(f"reduction word exceeded {bound} generators")
    a = alpha
    for c, x in zip(simples, coeff):
        if x:
            a = a + c * x
    word = WeylWord(gens, S)
    if apply_word(word, datum(alpha, S)) != datum(a, S):
        raise IdentityFailure("reduction word does not move e^alpha to e^alpha0")
    return word, a


# -- identities ------------------------------------------------------------

def twist_pair_identity(C: NSClass, b: int, S: SurfaceData) -> bool:
    """Refl(v2) o Refl(v1) == Trans(-C) with v1 = -(0, C, b+1), v2 = (0, C, b+2)."""
    if S.pair(C, C) != -2:
        raise WrongNorm("C must have (C^2) = -2")
    v1 = -CohClass(0, C, b + 1)
    v2 = CohClass(0, C, b + 2)
    lhs = WeylWord([Refl(v1), Refl(v2)], S).matrix
    rhs = WeylWord([Trans(-C)], S).matrix
    if lhs != rhs:
        raise IdentityFailure(f"twist pair identity fails for b = {b}")
    return True


def extended_normal_form(w: WeylWord) -> tuple[NSClass, WeylWord]:
    """(D, phi) with w = Trans(D) o phi and phi a word of Refl((0, C, 0)).

    Accepts words in Trans(D) and Refl((0, C, m)); the latter equals
    Trans(-mC) o Refl((0, C, 0)).
    """
    S = w.surface
    D = NSClass.zero(S.rank)
    finite: list[WeylGen] = []
    for g in w.gens:
        if isinstance(g, Trans):
            D = D + g.D
            continue
        u = g.u
        if u.r != 0:
            raise HypothesisViolation("reflection is not in the extended affine Weyl group")
        C, m = u.c1, u.s
        if m.denominator != 1:
            raise HypothesisViolation("reflection class has non-integral point part")
        # g o Trans(D) o phi = Trans(s(D) - mC) o s o phi
        D = D + C * S.pair(D, C) - C * m
        finite.append(Refl(CohClass(0, C, 0)))
    phi = WeylWord(finite, S)
    check = linalg.mat_mul(trans_matrix(D, S), [list(r) for r in phi.matrix])
    if check != [list(r) for r in w.matrix]:
        raise IdentityFailure("normal form does not reproduce the word")
    return D, phi


def conjugate(w: WeylWord, iso) -> WeylWord:
    """Replace each Refl(u) by Refl(Phi(u)) and verify Phi o w = w' o Phi."""
    from .fmcoh import fm_apply, fm_matrix

    new = []
    for g in w.gens:
        if not isinstance(g, Refl):
            raise HypothesisViolation("only reflection words can be conjugated")
        new.append(Refl(fm_apply(g.u, iso)))
    out = WeylWord(new, iso.target)
    phi = fm_matrix(iso)
    lhs = linalg.mat_mul(phi, [list(r) for r in w.matrix])
    rhs = linalg.mat_mul([list(r) for r in out.matrix], phi)
    if lhs != rhs:
        raise IdentityFailure("conjugation identity fails")
    return out
