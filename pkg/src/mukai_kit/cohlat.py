"""Surface numerics, the even cohomology ring and the Mukai pairing.

A class in even cohomology is stored as ``(r, c1, s)`` with ``r`` in H^0,
``c1`` in NS(X) (coordinates in a user-fixed basis) and ``s`` in H^4,
identified with Q through integration. All coordinates are Fractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, Sequence

from . import linalg
from .errors import DimensionMismatch, NotDefined, NotIntegral, SignatureError


def _scaled(xs: Sequence[Fraction]) -> tuple[list[int], int]:
    """Integers n_i and d > 0 with xs_i = n_i / d."""
    d = 1
    for x in xs:
        q = x.denominator
        if q != 1:
            d = d * q // gcd(d, q)
    if d == 1:
        return [x.numerator for x in xs], 1
    return [x.numerator * (d // x.denominator) for x in xs], d


def _fracs(xs: Iterable) -> tuple[Fraction, ...]:
    return tuple(x if isinstance(x, Fraction) else Fraction(x) for x in xs)


@dataclass(frozen=True)
class SurfaceData:
    """Numerical model of a smooth projective surface.

    ``gram`` is the intersection form on NS(X) in the chosen basis,
    ``canonical`` the coordinates of K_X and ``chiO`` is chi(O_X).
    """

    gram: tuple[tuple[int, ...], ...]
    canonical: tuple[int, ...]
    chiO: int

    def __init__(self, gram: Sequence[Sequence[int]], canonical: Sequence[int] | None = None,
                 chiO: int = 2, *, check: bool = True):
        g = tuple(tuple(int(x) for x in row) for row in gram)
        rho = len(g)
        k = tuple(int(x) for x in canonical) if canonical is not None else (0,) * rho
        object.__setattr__(self, "gram", g)
        object.__setattr__(self, "canonical", k)
        object.__setattr__(self, "chiO", int(chiO))
        if check:
            self.validate()

    def validate(self) -> None:
        rho = self.rank
        if rho == 0 or any(len(row) != rho for row in self.gram):
            raise DimensionMismatch("gram must be a nonempty square matrix")
        if len(self.canonical) != rho:
            raise DimensionMismatch("canonical class has wrong length")
        if not linalg.is_symmetric(self.gram):
            raise SignatureError("gram is not symmetric")
        sig = linalg.signature(self.gram)
        if sig != (1, rho - 1, 0):
            raise SignatureError(f"gram has inertia {sig}, expected (1, {rho - 1}, 0)")

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def k3_type(self) -> bool:
        return self.chiO == 2 and not any(self.canonical)

    @property
    def canonical_class(self) -> "NSClass":
        return NSClass(self.canonical)

    def pair(self, x: "NSClass", y: "NSClass") -> Fraction:
        if len(x) != self.rank or len(y) != self.rank:
            raise DimensionMismatch(f"NS classes must have length {self.rank}")
        # integer arithmetic on cleared denominators; the Gram matrix is integral
        xs, dx = _scaled(x.coords)
        ys, dy = _scaled(y.coords)
        total = 0
        for xi, row in zip(xs, self.gram):
            if xi:
                total += xi * sum(g * yj for g, yj in zip(row, ys))
        return Fraction(total, dx * dy)

    def mukai_gram(self) -> list[list[Fraction]]:
        """Gram matrix of the Mukai pairing on coordinates (r, c1, s)."""
        n = self.rank + 2
        j = linalg.zeros(n, n)
        j[0][n - 1] = j[n - 1][0] = Fraction(-1)
        for a in range(self.rank):
            for b in range(self.rank):
                j[a + 1][b + 1] = Fraction(self.gram[a][b])
        return j

    def change_basis(self, p: Sequence[Sequence[int]]) -> "SurfaceData":
        """Surface in the basis given by the columns of the unimodular ``p``."""
        g = linalg.congruent(p, self.gram)
        k = linalg.mat_vec(linalg.inverse(p), self.canonical)
        return SurfaceData([[int(x) for x in row] for row in g], [int(x) for x in k], self.chiO)


@dataclass(frozen=True)
class NSClass:
    coords: tuple[Fraction, ...]

    def __init__(self, coords: Iterable):
        object.__setattr__(self, "coords", _fracs(coords))

    @classmethod
    def zero(cls, rho: int) -> "NSClass":
        return cls((0,) * rho)

    @classmethod
    def basis(cls, rho: int, i: int) -> "NSClass":
        return cls(int(j == i) for j in range(rho))

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def _check(self, other: "NSClass") -> None:
        if len(other) != len(self):
            raise DimensionMismatch("NS classes of different length")

    def __add__(self, other: "NSClass") -> "NSClass":
        self._check(other)
        return NSClass(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other: "NSClass") -> "NSClass":
        self._check(other)
        return NSClass(a - b for a, b in zip(self.coords, other.coords))

    def __neg__(self) -> "NSClass":
        return NSClass(-a for a in self.coords)

    def __mul__(self, k) -> "NSClass":
        return NSClass(a * k for a in self.coords)

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return any(self.coords)

    def is_integral(self) -> bool:
        return linalg.is_integral_vector(self.coords)


@dataclass(frozen=True)
class CohClass:
    """Even cohomology class (r, c1, s); used for Mukai vectors and ch-vectors."""

    r: Fraction
    c1: NSClass
    s: Fraction

    def __init__(self, r, c1, s):
        object.__setattr__(self, "r", Fraction(r))
        object.__setattr__(self, "c1", c1 if isinstance(c1, NSClass) else NSClass(c1))
        object.__setattr__(self, "s", Fraction(s))

    @classmethod
    def from_coords(cls, coords: Sequence) -> "CohClass":
        return cls(coords[0], coords[1:-1], coords[-1])

    @classmethod
    def point(cls, rho: int) -> "CohClass":
        """The point class varrho = (0, 0, 1)."""
        return cls(0, NSClass.zero(rho), 1)

    @classmethod
    def unit(cls, rho: int) -> "CohClass":
        return cls(1, NSClass.zero(rho), 0)

    @classmethod
    def divisor(cls, d: NSClass) -> "CohClass":
        return cls(0, d, 0)

    @property
    def coords(self) -> tuple[Fraction, ...]:
        return (self.r, *self.c1.coords, self.s)

    @property
    def rho(self) -> int:
        return len(self.c1)

    def __add__(self, other: "CohClass") -> "CohClass":
        return CohClass(self.r + other.r, self.c1 + other.c1, self.s + other.s)

    def __sub__(self, other: "CohClass") -> "CohClass":
        return CohClass(self.r - other.r, self.c1 - other.c1, self.s - other.s)

    def __neg__(self) -> "CohClass":
        return CohClass(-self.r, -self.c1, -self.s)

    def __mul__(self, k) -> "CohClass":
        return CohClass(self.r * k, self.c1 * k, self.s * k)

    __rmul__ = __mul__

    def dual(self) -> "CohClass":
        return CohClass(self.r, -self.c1, self.s)

    def is_integral(self) -> bool:
        return linalg.is_integral_vector(self.coords)

    def is_primitive(self) -> bool:
        if not self.is_integral():
            raise NotIntegral("primitivity is only defined for integral classes")
        return linalg.content([int(x) for x in self.coords]) == 1

    def __repr__(self) -> str:
        c = ", ".join(str(x) for x in self.c1.coords)
        return f"CohClass({self.r}, [{c}], {self.s})"


@dataclass(frozen=True)
class GammaClass:
    """(rk, c1, chi): the image of a K-theory class under E -> (rk E, c1(E), chi(E))."""

    rk: int
    c1: NSClass
    chi: int

    def __init__(self, rk, c1, chi):
        object.__setattr__(self, "rk", int(rk))
        object.__setattr__(self, "c1", c1 if isinstance(c1, NSClass) else NSClass(c1))
        object.__setattr__(self, "chi", int(chi))


def _check_dims(S: SurfaceData, *xs: CohClass) -> None:
    for x in xs:
        if x.rho != S.rank:
            raise DimensionMismatch(f"class has NS length {x.rho}, surface has rank {S.rank}")


def mukai_pairing(x: CohClass, y: CohClass, S: SurfaceData) -> Fraction:
    _check_dims(S, x, y)
    return S.pair(x.c1, y.c1) - x.r * y.s - x.s * y.r


def cup(x: CohClass, y: CohClass, S: SurfaceData) -> CohClass:
    _check_dims(S, x, y)
    return CohClass(
        x.r * y.r,
        x.c1 * y.r + y.c1 * x.r,
        x.r * y.s + x.s * y.r + S.pair(x.c1, y.c1),
    )


def integrate(x: CohClass) -> Fraction:
    return x.s


def todd(S: SurfaceData) -> CohClass:
    return CohClass(1, NSClass(Fraction(-k, 2) for k in S.canonical), S.chiO)


def exp_class(d: NSClass, S: SurfaceData) -> CohClass:
    """e^D = (1, D, (D^2)/2)."""
    return CohClass(1, d, S.pair(d, d) / 2)


def euler_form(x: CohClass, y: CohClass, S: SurfaceData) -> Fraction:
    """chi(x, y) = integral of x^dual . y . td for ch-vectors x, y.

    Evaluated through the top-degree part of the product:
    r s' + r' s - (c, c') - (r c' - r' c, K)/2 + r r' chiO.
    """
    _check_dims(S, x, y)
    val = x.r * y.s + y.r * x.s - S.pair(x.c1, y.c1) + x.r * y.r * S.chiO
    if any(S.canonical):
        K = S.canonical_class
        val -= (x.r * S.pair(y.c1, K) - y.r * S.pair(x.c1, K)) / 2
    return val


def sqrt_td(S: SurfaceData) -> CohClass:
    """Square root of the Todd class; (1, 0, 1) on K3-type data."""
    return unit_sqrt(todd(S), S)


def unit_sqrt(x: CohClass, S: SurfaceData) -> CohClass:
    """Square root (a, b, c) of a class with positive square rank.

    a = sqrt(r), b = c1 / (2a), c = (s - (b, b)) / (2a): the two-term series
    is exact because products of degree >= 3 vanish.
    """
    a = rational_sqrt(x.r)
    if a is None or a <= 0:
        raise NotDefined(f"rank {x.r} is not a positive rational square")
    b = x.c1 * (1 / (2 * a))
    c = (x.s - S.pair(b, b)) / (2 * a)
    return CohClass(a, b, c)


def unit_inverse(x: CohClass, S: SurfaceData) -> CohClass:
    if x.r == 0:
        raise NotDefined("class with zero rank is not invertible")
    a = 1 / x.r
    b = x.c1 * (-a * a)
    c = -(x.s * a * a) + S.pair(x.c1, x.c1) * a * a * a
    return CohClass(a, b, c)


def rational_sqrt(q: Fraction) -> Fraction | None:
    q = Fraction(q)
    if q < 0:
        return None
    n, d = isqrt(q.numerator), isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


def twisted_chern(chG: CohClass, chGE: CohClass, S: SurfaceData) -> CohClass:
    """ch_G(E) = ch(G^dual (x) E) / sqrt(ch(G^dual (x) G)).

    ``chG`` is ch(G^dual (x) G) = (r^2, 0, t); ``chGE`` is ch(G^dual (x) E).
    """
    _check_dims(S, chG, chGE)
    if chG.c1:
        raise NotDefined("ch(G^dual (x) G) must have vanishing c1")
    root = unit_sqrt(chG, S)
    return cup(chGE, unit_inverse(root, S), S)


def mukai_vector(g: GammaClass, S: SurfaceData) -> CohClass:
    """v(E) = rk + c1 + (chi - rk) varrho, defined on K3-type data or for rank 0."""
    if len(g.c1) != S.rank:
        raise DimensionMismatch("gamma class has wrong NS length")
    if not S.k3_type and g.rk != 0:
        raise NotDefined("Mukai vector needs K3-type data or rank 0")
    return CohClass(g.rk, g.c1, g.chi - g.rk)


def from_gamma(g: GammaClass, S: SurfaceData) -> CohClass:
    """ch-vector (r, c1, ch2) with ch2 = chi - rk chiO + (c1, K)/2."""
    if len(g.c1) != S.rank:
        raise DimensionMismatch("gamma class has wrong NS length")
    ch2 = g.chi - g.rk * S.chiO + S.pair(g.c1, S.canonical_class) / 2
    return CohClass(g.rk, g.c1, ch2)


def to_gamma(x: CohClass, S: SurfaceData) -> GammaClass:
    _check_dims(S, x)
    chi = x.s + x.r * S.chiO - S.pair(x.c1, S.canonical_class) / 2
    if not (x.r.denominator == 1 and x.c1.is_integral() and chi.denominator == 1):
        raise NotIntegral("class does not come from an integral (rk, c1, chi) triple")
    return GammaClass(int(x.r), NSClass(x.c1), int(chi))


def degree(x: CohClass, H: NSClass, S: SurfaceData) -> Fraction:
    return S.pair(x.c1, H)


def deg_twisted(vG: CohClass, v: CohClass, H: NSClass, S: SurfaceData) -> Fraction:
    """deg_G(v) = (rk G c1(v) - rk v c1(G), H)."""
    _check_dims(S, vG, v)
    if vG.r <= 0:
        raise NotDefined("twisting class needs positive rank")
    return S.pair(v.c1 * vG.r - vG.c1 * v.r, H)


def mu_twisted(vG: CohClass, v: CohClass, H: NSClass, S: SurfaceData) -> Fraction:
    if v.r == 0:
        raise NotDefined("twisted slope is undefined in rank 0")
    return deg_twisted(vG, v, H, S) / (vG.r * v.r)


def expected_dim(v: CohClass, S: SurfaceData) -> Fraction:
    return mukai_pairing(v, v, S) + 2


def coords_gcd(x: CohClass) -> int:
    return linalg.content([int(c) for c in x.coords]) if x.is_integral() else 0

