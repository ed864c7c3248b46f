"""Exact Fincke-Pohst enumeration with rational arithmetic only."""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Sequence

from ..errors import EnumerationLimit


def ldl(gram: Sequence[Sequence]) -> tuple[list[Fraction], list[list[Fraction]]]:
    """Q(x) = sum_i d_i (x_i + sum_{j>i} mu_ij x_j)^2 for positive definite gram."""
    n = len(gram)
    a = [[Fraction(x) for x in row] for row in gram]
    d = [Fraction(0)] * n
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        if a[i][i] <= 0:
            raise ValueError("form is not positive definite")
        d[i] = a[i][i]
        for j in range(i + 1, n):
            mu[i][j] = a[i][j] / d[i]
        for j in range(i + 1, n):
            f = a[j][i] / d[i]
            if f:
                for k in range(i + 1, n):
                    a[j][k] -= f * a[i][k]
    return d, mu


def floor_plus_sqrt(c: Fraction, s: Fraction) -> int:
    """floor(c + sqrt(s)) for rationals c and s >= 0."""
    num, den = s.numerator, s.denominator
    root = Fraction(isqrt(num * den), den)
    n = (c + root).__floor__()

    def ok(m: int) -> bool:
        t = m - c
        return t <= 0 or t * t <= s

    while ok(n + 1):
        n += 1
    while not ok(n):
        n -= 1
    return n


def enumerate_shifted(gram: Sequence[Sequence[int]], target, center: Sequence | None = None,
                      limit: int = 10**7) -> list[tuple[int, ...]]:
    """All integer y with (y + t)^T gram (y + t) == target, sorted lexicographically."""
    n = len(gram)
    target = Fraction(target)
    if n == 0:
        return [()] if target == 0 else []
    if target < 0:
        return []
    t = [Fraction(x) for x in center] if center is not None else [Fraction(0)] * n
    d, mu = ldl(gram)
    g = [[Fraction(x) for x in row] for row in gram]
    y = [0] * n
    out: list[tuple[int, ...]] = []
    visited = 0

    def rec(i: int, remaining: Fraction) -> None:
        nonlocal visited
        u = t[i] + sum((mu[i][j] * (y[j] + t[j]) for j in range(i + 1, n)), Fraction(0))
        s = remaining / d[i]
        lo = -floor_plus_sqrt(u, s)
        hi = floor_plus_sqrt(-u, s)
        for yi in range(lo, hi + 1):
            visited += 1
            if visited > limit:
                raise EnumerationLimit(f"enumeration exceeded {limit} nodes")
            y[i] = yi
            rest = remaining - d[i] * (yi + u) ** 2
            if i == 0:
                if rest == 0:
                    out.append(tuple(y))
            else:
                rec(i - 1, rest)
        y[i] = 0

    rec(n - 1, target)
    # Final exact check against the original form.
    checked = []
    for v in out:
        x = [vi + ti for vi, ti in zip(v, t)]
        q = sum((x[a] * g[a][b] * x[b] for a in range(n) for b in range(n)), Fraction(0))
        if q == target:
            checked.append(v)
    checked.sort()
    return checked
