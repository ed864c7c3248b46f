"""Walls in the space of twist parameters alpha and crossings of segments.

alpha is an NS class. In the zero-dimensional setting it enters the Mukai
lattice as (0, alpha, 0); in the two-dimensional setting as delta(alpha)
with (alpha, H) = 0. Only walls W_u with <v0, u> = 0 are produced in the
latter case, so every such wall passes through alpha = 0.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import kernels, linalg
from .cohlat import CohClass, NSClass, SurfaceData, mukai_pairing
from .errors import BoxExhausted, EndpointOnWall, HypothesisViolation, SignatureError
from .roots import ns_perp


@dataclass(frozen=True)
class Wall:
    """{alpha : normal . alpha + offset = 0} on NS coordinates."""

    normal: tuple[Fraction, ...]
    offset: Fraction
    tag: CohClass
    degenerate: bool = False

    def value(self, alpha: NSClass | Sequence) -> Fraction:
        coords = alpha.coords if isinstance(alpha, NSClass) else alpha
        return linalg.dot(self.normal, coords) + self.offset

    def contains(self, alpha) -> bool:
        return self.value(alpha) == 0

    def meets_box(self, box: Sequence[tuple]) -> bool:
        lo = hi = self.offset
        for n, (a, b) in zip(self.normal, box):
            lo += min(n * a, n * b)
            hi += max(n * a, n * b)
        return lo <= 0 <= hi


def _wall(normal: Sequence, offset, tag: CohClass, degenerate: bool = False) -> Wall:
    normal = tuple(Fraction(x) for x in normal)
    return Wall(normal, Fraction(offset), tag, degenerate or not any(normal))


def walls_zero_dim(v: CohClass, vG: CohClass, roots: Sequence[CohClass], S: SurfaceData) -> list[Wall]:
    """One wall per u: <u, alpha><v, vG> - <v, alpha><u, vG> = 0.

    A wall with <u, vG> = 0 or <v, vG> = 0, or with zero normal, is flagged
    degenerate; such walls are ignored by genericity tests.
    """
    cv = mukai_pairing(v, vG, S)
    gv = linalg.mat_vec(S.gram, list(v.c1.coords))
    out = []
    for u in roots:
        cu = mukai_pairing(u, vG, S)
        gu = linalg.mat_vec(S.gram, list(u.c1.coords))
        normal = [cv * a - cu * b for a, b in zip(gu, gv)]
        out.append(_wall(normal, 0, u, cu == 0 or cv == 0))
    return out


def _particular_solution(row: Sequence[int], rhs: int) -> list[int] | None:
    """Integer c with row . c = rhs, or None."""
    g = linalg.content(row)
    if g == 0:
        return [0] * len(row) if rhs == 0 else None
    if rhs % g:
        return None
    w = [x // g for x in row]
    u = linalg.unimodular_with_first_column(w)
    # w = U e1, so w . c = e1 . (U^T c); take U^T c = (rhs/g) e1.
    ut_inv = linalg.inverse(linalg.transpose(u))
    return [int(r[0] * (rhs // g)) for r in ut_inv]


def u_prime_classes(v0: CohClass, H: NSClass, S: SurfaceData, limit: int | None = None) -> list[CohClass]:
    """Integral u with <u^2> = -2, <v0, u> = 0, <delta(H), u> = 0 and 0 < rk u < rk v0.

    Every such u is (k/r0) v0 + delta(D) with D in H^perp and (D^2) = -2.
    For each rank k the admissible c1(u) form a coset of H^perp in NS; the
    norm equation is a shifted short-vector problem on H^perp.
    """
    if not v0.is_integral() or v0.r <= 0:
        raise HypothesisViolation("v0 must be integral of positive rank")
    if mukai_pairing(v0, v0, S) != 0:
        raise HypothesisViolation("v0 must be isotropic")
    r0 = int(v0.r)
    xi0 = v0.c1
    a0 = v0.s
    P = ns_perp(H, S)
    if P.rank == 0 or r0 <= 1:
        return []
    if not P.is_negative_definite():
        raise SignatureError("H^perp is not negative definite")
    gH = [int(x) for x in linalg.mat_vec(S.gram, list(H.coords))]
    neg = [[-int(x) for x in row] for row in P.gram]
    Bt = linalg.transpose(P.basis)
    out = []
    for k in range(1, r0):
        hk = Fraction(k) * S.pair(xi0, H) / r0
        if hk.denominator != 1:
            continue
        cp = _particular_solution(gH, int(hk))
        if cp is None:
            continue
        t = [Fraction(c) - Fraction(k) * x / r0 for c, x in zip(cp, xi0.coords)]
        tau = linalg.solve(Bt, t)
        if tau is None:
            raise HypothesisViolation("coset representative is not orthogonal to H")
        for y in kernels.enumerate_shifted(neg, 2, tau, limit=limit):
            c1 = [c + sum(b[i] * yi for b, yi in zip(P.basis, y)) for i, c in enumerate(cp)]
            D = NSClass([c - Fraction(k) * x / r0 for c, x in zip(c1, xi0.coords)])
            s = Fraction(k) * a0 / r0 + S.pair(D, xi0) / r0
            if s.denominator != 1:
                continue
            out.append(CohClass(k, c1, s))
    out.sort(key=lambda u: u.coords)
    return out


def walls_two_dim(v0: CohClass, H: NSClass, S: SurfaceData, limit: int | None = None) -> list[Wall]:
    """W_u = {alpha in H^perp : <v0 + delta(alpha), u> = 0} = {(alpha, D_u) = 0} for u in U'."""
    out = []
    r0 = v0.r
    for u in u_prime_classes(v0, H, S, limit):
        D = u.c1 - v0.c1 * (u.r / r0)
        normal = linalg.mat_vec(S.gram, list(D.coords))
        out.append(_wall(normal, 0, u))
    return out


def is_general(alpha: NSClass | Sequence, walls: Sequence[Wall]) -> bool:
    return not any(w.contains(alpha) for w in walls if not w.degenerate)


def _next_prime(n: int) -> int:
    def prime(m: int) -> bool:
        if m < 2:
            return False
        i = 2
        while i * i <= m:
            if m % i == 0:
                return False
            i += 1
        return True

    while not prime(n):
        n += 1
    return n


def sample_generic(walls: Sequence[Wall], box: Sequence[tuple], seed: int = 0,
                   attempts: int = 1000) -> NSClass:
    """Deterministic point of the box on no wall; the center when it is general.

    Coordinates are dithered on a grid with a prime denominator q chosen
    coprime to the denominators and numerators of all wall data.
    """
    box = [(Fraction(a), Fraction(b)) for a, b in box]
    center = NSClass([(a + b) / 2 for a, b in box])
    if is_general(center, walls):
        return center
    bound = 1
    for w in walls:
        for x in (*w.normal, w.offset):
            bound = max(bound, abs(x.numerator), x.denominator)
    q = _next_prime(max(1009, bound + 1))
    rng = random.Random(seed)
    for _ in range(attempts):
        pt = NSClass([a + (b - a) * Fraction(rng.randrange(1, q), q) for a, b in box])
        if is_general(pt, walls):
            return pt
    raise BoxExhausted(f"no general point found in {attempts} attempts")


@dataclass(frozen=True)
class ChamberPath:
    start: NSClass
    end: NSClass
    crossings: tuple[tuple[Wall, Fraction], ...]
    groups: tuple[tuple[Fraction, tuple[Wall, ...]], ...] = field(default=())


def crossing_path(alpha1: NSClass, alpha2: NSClass, walls: Sequence[Wall]) -> ChamberPath:
    """Walls met by the segment alpha1 -> alpha2 with their exact parameters t."""
    live = [w for w in walls if not w.degenerate]
    for w in live:
        if w.contains(alpha1) or w.contains(alpha2):
            raise EndpointOnWall(f"endpoint lies on the wall of {w.tag}")
    hits = []
    for i, w in enumerate(live):
        f1, f2 = w.value(alpha1), w.value(alpha2)
        if (f1 < 0) != (f2 < 0):
            hits.append((f1 / (f1 - f2), i, w))
    hits.sort(key=lambda h: (h[0], h[1]))
    crossings = tuple((w, t) for t, _, w in hits)
    groups: list[tuple[Fraction, list[Wall]]] = []
    for t, _, w in hits:
        if groups and groups[-1][0] == t:
            groups[-1][1].append(w)
        else:
            groups.append((t, [w]))
    return ChamberPath(alpha1, alpha2, crossings, tuple((t, tuple(ws)) for t, ws in groups))
