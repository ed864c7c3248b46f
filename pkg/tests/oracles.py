"""Independent oracles used to cross-check the library.

None of these call into mukai_kit's enumeration or linear algebra: the box
enumerators use numpy, kernels use sympy, and the Euler form is expanded
by hand.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import isqrt

import numpy as np
import sympy


def box_short_vectors(gram, target: int) -> list[tuple[int, ...]]:
    """All integer x with x^T gram x == target, gram positive definite.

    Brute force over the box |x_i| <= floor(sqrt(target * (gram^-1)_ii)),
    which contains every solution.
    """
    g = np.array(gram, dtype=np.int64)
    n = g.shape[0]
    ginv = sympy.Matrix(gram).inv()
    bounds = [isqrt(int(sympy.floor(target * ginv[i, i]))) for i in range(n)]
    k = n // 2
    pre = np.array(list(itertools.product(*[range(-b, b + 1) for b in bounds[:k]])), dtype=np.int64)
    suf = np.array(list(itertools.product(*[range(-b, b + 1) for b in bounds[k:]])), dtype=np.int64)
    if k == 0:
        pre = np.zeros((1, 0), dtype=np.int64)
    gpp, gps, gss = g[:k, :k], g[:k, k:], g[k:, k:]
    qs = np.einsum("ij,jk,ik->i", suf, gss, suf)
    cross_s = suf @ gps.T  # (n_s, k)
    out = []
    chunk = max(1, 4_000_000 // max(1, len(suf)))
    for start in range(0, len(pre), chunk):
        p = pre[start:start + chunk]
        qp = np.einsum("ij,jk,ik->i", p, gpp, p)
        total = qp[:, None] + 2 * (p @ cross_s.T) + qs[None, :]
        ii, jj = np.nonzero(total == target)
        for a, b in zip(ii, jj):
            out.append(tuple(int(x) for x in np.concatenate([p[a], suf[b]])))
    return sorted(out)


def sympy_kernel_primitive(cartan) -> tuple[int, ...]:
    """Primitive positive integer kernel vector of a corank-one matrix."""
    ns = sympy.Matrix(cartan).nullspace()
    if len(ns) != 1:
        raise AssertionError(f"kernel dimension {len(ns)}")
    v = ns[0]
    den = sympy.ilcm(*[sympy.fraction(x)[1] for x in v])
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = np.gcd(g, abs(x))
    ints = [x // int(g) for x in ints]
    if ints[0] < 0:
        ints = [-x for x in ints]
    return tuple(ints)


def euler_by_hand(x, y, gram, canonical, chiO) -> Fraction:
    """chi(x, y) for ch-vectors x = (r, c, s), y = (r', c', s'), expanded term by term.

    x^dual y = (r r', r c' - r' c, r s' + r' s - (c, c')); the top degree of
    the product with td = (1, -K/2, chiO) is read off directly.
    """
    r, c, s = Fraction(x[0]), [Fraction(t) for t in x[1:-1]], Fraction(x[-1])
    r2, c2, s2 = Fraction(y[0]), [Fraction(t) for t in y[1:-1]], Fraction(y[-1])
    n = len(c)

    def form(a, b):
        return sum(a[i] * gram[i][j] * b[j] for i in range(n) for j in range(n))

    mid = [r * b - r2 * a for a, b in zip(c, c2)]
    top = r * s2 + r2 * s - form(c, c2)
    half_k = [Fraction(-k, 2) for k in canonical]
    return top + form(mid, half_k) + r * r2 * chiO


def naive_u_prime(v0, H, gram, bound: int = 8) -> list[tuple[int, ...]]:
    """Box search for u with <u^2> = -2, <v0,u> = 0, <delta(H),u> = 0, 0 < rk u < rk v0.

    The box bounds c1(u) only; s(u) is then determined by the norm.
    """
    rho = len(gram)
    g = np.array(gram, dtype=object)
    r0 = int(v0[0])
    xi0 = [Fraction(t) for t in v0[1:-1]]
    a0 = Fraction(v0[-1])

    def form(a, b):
        return sum(a[i] * g[i][j] * b[j] for i in range(rho) for j in range(rho))

    hxi = form(H, xi0)
    out = []
    for r in range(1, r0):
        for c in itertools.product(range(-bound, bound + 1), repeat=rho):
            cc = form(c, c)
            # <u^2> = (c^2) - 2 r s = -2 fixes s
            if (cc + 2) % (2 * r):
                continue
            s = (cc + 2) // (2 * r)
            if form(c, xi0) - r0 * s - a0 * r != 0:
                continue
            # <delta(H), u> = (H, c) - r (H, xi0) / r0
            if form(H, c) - Fraction(r) * hxi / r0 != 0:
                continue
            out.append((r, *c, s))
    return sorted(out)
