"""Cohomological Fourier-Mukai isometries attached to a primitive isotropic v0.

Every v decomposes uniquely as ``l v0 + a varrho + delta(d H + D)`` with
(D, H) = 0, and the isometry sends it to
``l varrho' + a w0 - delta'(d Hhat + theta(D))``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

from . import linalg
from .cohlat import CohClass, NSClass, SurfaceData, deg_twisted, mukai_pairing
from .errors import HypothesisViolation, NotIntegral
from .roots import ns_perp


def delta(D: NSClass, v0: CohClass, S: SurfaceData) -> CohClass:
    """(0, D, (D, xi0)/r0)."""
    if v0.r == 0:
        raise HypothesisViolation("delta needs rk v0 > 0")
    return CohClass(0, D, S.pair(D, v0.c1) / v0.r)


@dataclass(frozen=True)
class FMDecomposition:
    l: Fraction
    a: Fraction
    d: Fraction
    D: NSClass


@dataclass(frozen=True)
class FMIsometry:
    """Source (S, v0, H), target (S', w0, Hhat) and theta: NS(S) -> NS(S').

    ``theta`` is a rho' x rho rational matrix; only its restriction to H^perp
    enters the map. ``post_twist`` optionally composes with multiplication by
    e^L on the target.
    """

    source: SurfaceData
    v0: CohClass
    H: NSClass
    target: SurfaceData
    w0: CohClass
    Hhat: NSClass
    theta: tuple[tuple[Fraction, ...], ...]
    post_twist: NSClass | None = None

    def __post_init__(self):
        object.__setattr__(self, "theta", tuple(tuple(Fraction(x) for x in row) for row in self.theta))


def make_isometry(source: SurfaceData, v0: CohClass, H: NSClass, target: SurfaceData | None = None,
                  xi_hat: NSClass | None = None, a_hat=None, Hhat: NSClass | None = None,
                  theta: Sequence[Sequence] | None = None, post_twist: NSClass | None = None) -> FMIsometry:
    """Build an FMIsometry filling defaults.

    The target defaults to the source, Hhat to H, theta to the identity and
    a_hat to (xi_hat^2) / (2 r0), the value forced by isotropy of w0. If
    xi_hat is omitted, -xi0 is used.
    """
    target = source if target is None else target
    Hhat = H if Hhat is None else Hhat
    xi_hat = -v0.c1 if xi_hat is None else xi_hat
    r0 = v0.r
    if a_hat is None:
        a_hat = target.pair(xi_hat, xi_hat) / (2 * r0)
    if theta is None:
        if target.rank != source.rank:
            raise HypothesisViolation("theta must be supplied when NS ranks differ")
        theta = linalg.identity(source.rank)
    w0 = CohClass(r0, xi_hat, a_hat)
    return FMIsometry(source, v0, H, target, w0, Hhat, tuple(tuple(r) for r in theta), post_twist)


def theta_apply(iso: FMIsometry, D: NSClass) -> NSClass:
    return NSClass(linalg.mat_vec(iso.theta, list(D.coords)))


def fm_decompose(v: CohClass, iso: FMIsometry) -> FMDecomposition:
    S, v0, H = iso.source, iso.v0, iso.H
    r0 = v0.r
    h2 = S.pair(H, H)
    if h2 == 0:
        raise HypothesisViolation("(H^2) must be nonzero")
    l = v.r / r0
    a = -mukai_pairing(v, v0, S) / r0
    d = deg_twisted(v0, v, H, S) / (r0 * h2)
    D = v.c1 - v0.c1 * l - H * d
    dec = FMDecomposition(l, a, d, D)
    if reassemble(dec, iso) != v:
        raise HypothesisViolation("decomposition does not reassemble; check v0 isotropy")
    return dec


def reassemble(dec: FMDecomposition, iso: FMIsometry) -> CohClass:
    S = iso.source
    rho = S.rank
    return iso.v0 * dec.l + CohClass.point(rho) * dec.a + delta(iso.H * dec.d + dec.D, iso.v0, S)


def fm_apply(v: CohClass, iso: FMIsometry) -> CohClass:
    dec = fm_decompose(v, iso)
    T = iso.target
    img = (CohClass.point(T.rank) * dec.l + iso.w0 * dec.a
           - delta(iso.Hhat * dec.d + theta_apply(iso, dec.D), iso.w0, T))
    if iso.post_twist is not None:
        from .weyl import translate

        img = translate(img, iso.post_twist, T)
    return img


def fm_matrix(iso: FMIsometry) -> list[list[Fraction]]:
    """(rho'+2) x (rho+2) matrix of the isometry on (r, c1, s) coordinates."""
    n = iso.source.rank + 2
    cols = []
    for k in range(n):
        e = [0] * n
        e[k] = 1
        cols.append(list(fm_apply(CohClass.from_coords(e), iso).coords))
    return linalg.transpose(cols)


@dataclass(frozen=True)
class FMValidation:
    ok: bool
    checks: tuple[tuple[str, bool], ...]
    first_failure: str | None = None
    integral: bool = False
    degree_gcds: tuple[int, int] = (0, 0)
    details: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok


def _deg_gcd(vG: CohClass, H: NSClass, S: SurfaceData, classes: Sequence[CohClass]) -> int:
    g = 0
    for c in classes:
        val = deg_twisted(vG, c, H, S)
        if val.denominator != 1:
            raise NotIntegral("degree is not an integer")
        g = gcd(g, int(val))
    return g


def _basis(S: SurfaceData) -> list[CohClass]:
    n = S.rank + 2
    return [CohClass.from_coords([int(i == k) for i in range(n)]) for k in range(n)]


def fm_validate(iso: FMIsometry) -> FMValidation:
    """Check every invariant of the isometry data; report the first failure."""
    S, T, v0, w0, H, Hh = iso.source, iso.target, iso.v0, iso.w0, iso.H, iso.Hhat
    checks: list[tuple[str, bool]] = []

    def add(name: str, ok: bool) -> bool:
        checks.append((name, bool(ok)))
        return bool(ok)

    shapes = (len(v0.c1) == S.rank and len(H) == S.rank and len(w0.c1) == T.rank
              and len(Hh) == T.rank and len(iso.theta) == T.rank
              and all(len(row) == S.rank for row in iso.theta))
    if not add("dimensions", shapes):
        return FMValidation(False, tuple(checks), "dimensions")
    add("v0 integral and primitive", v0.is_integral() and v0.is_primitive())
    add("v0 isotropic", mukai_pairing(v0, v0, S) == 0)
    add("rk v0 > 0", v0.r > 0)
    add("rk w0 = rk v0", w0.r == v0.r)
    add("w0 isotropic", mukai_pairing(w0, w0, T) == 0)
    add("(H^2) > 0", S.pair(H, H) > 0)
    add("(Hhat^2) = (H^2)", T.pair(Hh, Hh) == S.pair(H, H))
    perp = ns_perp(H, S)
    imgs = [theta_apply(iso, NSClass(b)) for b in perp.basis]
    add("theta maps H^perp into Hhat^perp", all(T.pair(x, Hh) == 0 for x in imgs))
    add("theta is an isometry on H^perp",
        all(T.pair(imgs[i], imgs[j]) == perp.gram[i][j]
            for i in range(perp.rank) for j in range(perp.rank)))
    failed = next((n for n, ok in checks if not ok), None)
    if failed:
        return FMValidation(False, tuple(checks), failed)
    m = fm_matrix(iso)
    add("pairing preserved", linalg.congruent(m, T.mukai_gram()) == S.mukai_gram())
    add("Phi(v0) = varrho'", fm_apply(v0, iso) == CohClass.point(T.rank) or iso.post_twist is not None)
    add("Phi(varrho) = w0", fm_apply(CohClass.point(S.rank), iso) == w0 or iso.post_twist is not None)
    untwisted = FMIsometry(S, v0, H, T, w0, Hh, iso.theta)
    basis = _basis(S)
    add("deg anti-preserved",
        all(deg_twisted(v0, b, H, S) == -deg_twisted(w0, fm_apply(b, untwisted), Hh, T)
            for b in basis))
    integral = linalg.is_integral_vector([x for row in m for x in row])
    gcds = (0, 0)
    if integral:
        gcds = (_deg_gcd(v0, H, S, basis), _deg_gcd(w0, Hh, T, _basis(T)))
        add("degree gcds agree", gcds[0] == gcds[1])
    failed = next((n for n, ok in checks if not ok), None)
    return FMValidation(failed is None, tuple(checks), failed, integral, gcds)


def theta_extended(iso: FMIsometry) -> list[list[Fraction]]:
    """Matrix of the map NS(S) -> NS(S') equal to theta on H^perp and H -> Hhat."""
    S = iso.source
    perp = ns_perp(iso.H, S)
    src = [list(iso.H.coords)] + [list(b) for b in perp.basis]
    dst = [list(iso.Hhat.coords)] + [list(theta_apply(iso, NSClass(b)).coords) for b in perp.basis]
    if len(src) != S.rank or iso.target.rank != S.rank:
        raise HypothesisViolation("theta extension needs equal NS ranks")
    # M . src_k = dst_k  =>  M = dst^T (src^T)^-1
    return linalg.mat_mul(linalg.transpose(dst), linalg.inverse(linalg.transpose(src)))


def fm_inverse(iso: FMIsometry) -> FMIsometry:
    """The isometry with (v0, varrho) and (varrho', w0) exchanged and theta inverted."""
    if iso.post_twist is not None:
        raise HypothesisViolation("invert the untwisted isometry and twist by -L first")
    inv_theta = linalg.inverse(theta_extended(iso))
    return FMIsometry(iso.target, iso.w0, iso.Hhat, iso.source, iso.v0, iso.H,
                      tuple(tuple(r) for r in inv_theta))
