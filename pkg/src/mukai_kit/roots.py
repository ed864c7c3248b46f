"""Sublattices of the Mukai lattice, (-2)-vectors and isotropic decompositions."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import kernels, linalg
from .cohlat import CohClass, NSClass, SurfaceData, from_gamma, euler_form
from .errors import (
    EnumerationLimit,
    FormNotDescending,
    HypothesisViolation,
    NotIntegral,
    NotNegativeDefinite,
)

MAX_MARK = 6  # largest mark of an affine ADE diagram (E8~)


@dataclass(frozen=True)
class SubLattice:
    """Integral sublattice with basis given by ambient integer coordinate vectors.

    ``ambient`` is the Gram matrix of the ambient bilinear form, ``tag`` one of
    ``"mukai"`` (coordinates (r, c1, s)), ``"euler"`` (coordinates
    (rk, c1, chi) with the form -chi) or ``"ns"``.
    """

    ambient: tuple[tuple[Fraction, ...], ...]
    basis: tuple[tuple[int, ...], ...]
    tag: str = "mukai"
    gram: tuple[tuple[Fraction, ...], ...] = field(init=False)

    def __post_init__(self):
        b = self.basis
        if b and linalg.rank(b) != len(b):
            raise ValueError("basis vectors are linearly dependent")
        cols = linalg.transpose(b) if b else []
        g = linalg.congruent(cols, self.ambient) if b else []
        object.__setattr__(self, "gram", tuple(tuple(row) for row in g))

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def dim(self) -> int:
        return len(self.ambient)

    def is_negative_definite(self) -> bool:
        return linalg.is_symmetric(self.gram) and linalg.is_negative_definite(self.gram)

    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    def is_symmetric(self) -> bool:
        return linalg.is_symmetric(self.gram)

    def pair(self, x: Sequence, y: Sequence) -> Fraction:
        """Form on ambient coordinates."""
        return linalg.bilinear(x, self.ambient, y)

    def vector(self, coeffs: Sequence[int]) -> tuple[int, ...]:
        """Ambient coordinates of the combination ``sum coeffs_i basis_i``."""
        out = [0] * self.dim
        for c, b in zip(coeffs, self.basis):
            if c:
                for k, x in enumerate(b):
                    out[k] += c * x
        return tuple(out)

    def coordinates(self, v: Sequence) -> tuple[int, ...] | None:
        """Integer coordinates of an ambient vector in this basis, or None."""
        if not self.basis:
            return () if not any(v) else None
        sol = linalg.solve(linalg.transpose(self.basis), list(v))
        if sol is None or not linalg.is_integral_vector(sol):
            return None
        return tuple(int(x) for x in sol)

    def __contains__(self, v) -> bool:
        coords = v.coords if isinstance(v, CohClass) else v
        return self.coordinates(coords) is not None

    def classes(self) -> list[CohClass]:
        return [CohClass.from_coords(b) for b in self.basis]


@dataclass(frozen=True)
class QuotientLattice(SubLattice):
    """sub / Z v with basis vectors given by lifts; ``modulus`` is v."""

    modulus: tuple[int, ...] = ()


@dataclass(frozen=True)
class RootSet:
    roots: tuple[tuple[int, ...], ...]
    norm: int = -2

    def __len__(self) -> int:
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    def vectors(self, sub: SubLattice) -> list[tuple[int, ...]]:
        return [sub.vector(r) for r in self.roots]


def _ambient_of(v) -> tuple[Fraction, ...]:
    return v.coords if isinstance(v, CohClass) else tuple(Fraction(x) for x in v)


def euler_gram(S: SurfaceData) -> list[list[Fraction]]:
    """Gram of -chi on (rk, c1, chi) coordinates; not symmetric unless K = 0."""
    n = S.rank + 2
    basis = []
    for k in range(n):
        e = [0] * n
        e[k] = 1
        basis.append(from_gamma(_gamma_of(e), S))
    return [[-euler_form(x, y, S) for y in basis] for x in basis]


def _gamma_of(coords: Sequence[int]):
    from .cohlat import GammaClass

    return GammaClass(coords[0], coords[1:-1], coords[-1])


def mukai_lattice(S: SurfaceData) -> SubLattice:
    n = S.rank + 2
    eye = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    return SubLattice(_freeze(S.mukai_gram()), eye, "mukai")


def _freeze(m) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(Fraction(x) for x in row) for row in m)


def perp_sublattice(vs: Iterable, S: SurfaceData, form: str = "mukai") -> SubLattice:
    """Saturated {x in Z^(rho+2) : B(x, v) = 0 for v in vs}.

    ``form="mukai"`` uses the Mukai pairing on (r, c1, s); ``form="euler"``
    uses -chi on (rk, c1, chi) coordinates, with x in the left slot.
    """
    ambient = S.mukai_gram() if form == "mukai" else euler_gram(S)
    rows = [linalg.mat_vec(ambient, list(_ambient_of(v))) for v in vs]
    rows = [r for r in rows if any(r)]
    basis = linalg.integer_kernel(rows, ncols=S.rank + 2)
    return SubLattice(_freeze(ambient), tuple(tuple(b) for b in basis), form)


def ns_perp(H: NSClass, S: SurfaceData) -> SubLattice:
    """H^perp inside NS(X), saturated."""
    row = linalg.mat_vec(S.gram, list(H.coords))
    basis = linalg.integer_kernel([row] if any(row) else [], ncols=S.rank)
    return SubLattice(_freeze(S.gram), tuple(tuple(b) for b in basis), "ns")


def quotient_mod(sub: SubLattice, v) -> QuotientLattice:
    """sub / Z v for v isotropic, primitive in sub and in the radical of the form."""
    vc = _ambient_of(v)
    c = sub.coordinates(vc)
    if c is None:
        raise HypothesisViolation("vector does not lie in the sublattice")
    g = sub.gram
    k = sub.rank
    left = [sum(c[i] * g[i][j] for i in range(k)) for j in range(k)]
    right = [sum(g[i][j] * c[j] for j in range(k)) for i in range(k)]
    if any(left) or any(right):
        raise FormNotDescending("vector pairs nontrivially with the sublattice")
    if linalg.content(c) != 1:
        raise HypothesisViolation("vector is not primitive in the sublattice")
    u = linalg.unimodular_with_first_column(c)
    new_basis = [sub.vector([u[i][j] for i in range(k)]) for j in range(k)]
    return QuotientLattice(sub.ambient, tuple(new_basis[1:]), sub.tag,
                           modulus=tuple(int(x) for x in vc))


def enumerate_roots(sub: SubLattice, norm: int = -2, limit: int | None = None,
                    backend: str | None = None) -> RootSet:
    """All x in the lattice with x^T gram x == norm, lexicographically sorted."""
    if norm >= 0:
        raise ValueError("norm must be negative")
    if not sub.is_negative_definite():
        raise NotNegativeDefinite("root enumeration needs a negative definite form")
    if sub.rank == 0:
        return RootSet((), norm)
    neg = [[-int(x) for x in row] for row in sub.gram]
    found = kernels.enumerate_shifted(neg, -norm, None, limit=limit, backend=backend)
    return RootSet(tuple(found), norm)


def window_lift(u: Sequence[int], modulus: Sequence[int], lo: int, hi: int) -> list[tuple[int, ...]]:
    """Lifts u + k * modulus with lo < rank < hi (rank = first coordinate)."""
    r0 = modulus[0]
    if r0 <= 0:
        raise HypothesisViolation("isotropic vector needs positive rank")
    ru = u[0]
    # smallest k with ru + k r0 > lo
    k = (lo - ru) // r0 + 1
    out = []
    while ru + k * r0 < hi:
        out.append(tuple(a + k * b for a, b in zip(u, modulus)))
        k += 1
    return out


def window_roots(v0: CohClass, L: SubLattice, rank_bound: int | None = None,
                 limit: int | None = None) -> list[CohClass]:
    """(-2)-classes u in L with 0 < rk u < rank_bound (default rk v0).

    Found by enumerating roots of L / Z v0 and lifting along v0.
    """
    if not v0.is_integral():
        raise NotIntegral("v0 must be integral")
    bound = int(v0.r) if rank_bound is None else rank_bound
    if bound <= 1:
        return []
    M = quotient_mod(L, v0)
    rs = enumerate_roots(M, -2, limit=limit)
    mod = [int(x) for x in v0.coords]
    out = set()
    for r in rs:
        for w in window_lift(M.vector(r), mod, 0, bound):
            out.add(w)
    return [CohClass.from_coords(w) for w in sorted(out)]


def _decompositions(target: tuple, pool: list[tuple[int, ...]], rank_total: int,
                    max_mult: int, limit: int) -> list[list[tuple[int, tuple[int, ...]]]]:
    results = []
    n = len(pool)
    dim = len(target)
    counter = [0]

    def rec(i: int, remaining: int, acc: list[int], chosen: list):
        counter[0] += 1
        if counter[0] > limit:
            raise EnumerationLimit(f"decomposition search exceeded {limit} nodes")
        if remaining == 0:
            if tuple(acc) == target:
                results.append(list(chosen))
            return
        if i == n:
            return
        u = pool[i]
        ru = u[0]
        top = min(remaining // ru, max_mult)
        for a in range(top, 0, -1):
            new = [x + a * y for x, y in zip(acc, u)]
            chosen.append((a, u))
            rec(i + 1, remaining - a * ru, new, chosen)
            chosen.pop()
        rec(i + 1, remaining, acc, chosen)

    rec(0, rank_total, [0] * dim, [])
    return results


def decompose_isotropic(v0: CohClass, L: SubLattice, max_mult: int = MAX_MARK,
                        limit: int | None = None) -> list[list[tuple[int, CohClass]]]:
    """Decompositions v0 = sum a_i u_i into distinct (-2)-classes of L, 0 < rk u_i < rk v0.

    Each decomposition is a list of (a_i, u_i) sorted by u_i; multiplicities
    are capped by ``max_mult``.
    """
    limit = kernels.max_enum() if limit is None else limit
    pool = [tuple(int(x) for x in u.coords) for u in window_roots(v0, L, limit=limit)]
    target = tuple(int(x) for x in v0.coords)
    found = _decompositions(target, pool, int(v0.r), max_mult, limit)
    out = []
    for dec in found:
        out.append(sorted(((a, CohClass.from_coords(u)) for a, u in dec), key=lambda t: t[1].coords))
    out.sort(key=lambda d: [(a, u.coords) for a, u in d])
    return out


def numerically_irreducible(u: CohClass, L: SubLattice, v0: CohClass,
                            limit: int | None = None) -> bool:
    """True iff u admits no decomposition into (-2)-classes of L of smaller positive rank."""
    limit = kernels.max_enum() if limit is None else limit
    uc = tuple(int(x) for x in u.coords) if u.is_integral() else None
    if uc is None or u not in L:
        raise HypothesisViolation("u must be an integral class of L")
    if L.pair(uc, uc) != -2 or u.r <= 0:
        raise HypothesisViolation("u must be a (-2)-class of positive rank")
    ru = int(u.r)
    M = quotient_mod(L, v0)
    mod = [int(x) for x in v0.coords]
    pool = set()
    for r in enumerate_roots(M, -2, limit=limit):
        for w in window_lift(M.vector(r), mod, 0, ru):
            pool.add(w)
    if not pool:
        return True
    found = _decompositions(uc, sorted(pool), ru, ru, limit)
    return not found
