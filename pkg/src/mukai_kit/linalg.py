"""Exact linear algebra over Q and Z on nested lists of Fractions/ints.

Matrices are lists of rows. Nothing here uses floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = list[list[Fraction]]


def frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def as_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[frac(x) for x in row] for row in rows]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def zeros(m: int, n: int) -> Matrix:
    return [[Fraction(0)] * n for _ in range(m)]


def transpose(a: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*a)]


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def mat_vec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a]


def dot(x: Sequence, y: Sequence) -> Fraction:
    return sum((a * b for a, b in zip(x, y)), Fraction(0))


def bilinear(x: Sequence, g: Sequence[Sequence], y: Sequence) -> Fraction:
    """x^T g y."""
    total = Fraction(0)
    for i, xi in enumerate(x):
        if xi:
            row = g[i]
            total += xi * sum((row[j] * yj for j, yj in enumerate(y) if yj), Fraction(0))
    return total


def congruent(b: Sequence[Sequence], g: Sequence[Sequence]) -> list[list]:
    """b^T g b for a basis given as the columns of ``b``."""
    return mat_mul(transpose(b), mat_mul(g, b))


def is_integral_vector(v: Sequence) -> bool:
    return all(frac(x).denominator == 1 for x in v)


def lcm_denominator(v: Sequence) -> int:
    d = 1
    for x in v:
        q = frac(x).denominator
        d = d * q // gcd(d, q)
    return d


def content(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g


def primitive_integer(v: Sequence) -> list[int]:
    """Smallest positive integer multiple of ``v`` made primitive."""
    d = lcm_denominator(v)
    w = [int(frac(x) * d) for x in v]
    g = content(w)
    return [x // g for x in w] if g else w


def _row_echelon(a: Matrix) -> tuple[Matrix, list[int]]:
    m = [row[:] for row in a]
    pivots: list[int] = []
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(a: Sequence[Sequence]) -> int:
    if not a or not a[0]:
        return 0
    return len(_row_echelon(as_matrix(a))[1])


def det(a: Sequence[Sequence]) -> Fraction:
    m = as_matrix(a)
    n = len(m)
    result = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            result = -result
        result *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return result


def inverse(a: Sequence[Sequence]) -> Matrix:
    n = len(a)
    aug = [list(row) + e for row, e in zip(as_matrix(a), identity(n))]
    red, piv = _row_echelon(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in red[:n]]


def solve(a: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """One solution x of a x = b, or None when inconsistent."""
    m = len(a)
    n = len(a[0]) if m else 0
    aug = [list(row) + [frac(bi)] for row, bi in zip(as_matrix(a), b)]
    red, piv = _row_echelon(aug)
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for r, c in enumerate(piv):
        x[c] = red[r][n]
    return x


def rational_kernel(a: Sequence[Sequence], ncols: int | None = None) -> Matrix:
    """Basis (as a list of vectors) of the right kernel of ``a`` over Q."""
    if not a:
        n = ncols or 0
        return identity(n)
    n = len(a[0])
    red, piv = _row_echelon(as_matrix(a))
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for r, c in enumerate(piv):
            v[c] = -red[r][f]
        basis.append(v)
    return basis


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a - (a // b) * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return x0, y0, a


def _integer_row_reduce(rows: list[list[int]], track: list[list[int]]) -> int:
    """Integer row echelon in place, applying the same row ops to ``track``.

    Returns the number of nonzero rows (they come first).
    """
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        for i in range(r + 1, nrows):
            if rows[i][c] == 0:
                continue
            a, b = rows[r][c], rows[i][c]
            if a == 0:
                rows[r], rows[i] = rows[i], rows[r]
                track[r], track[i] = track[i], track[r]
                continue
            x, y, g = _xgcd(a, b)
            ag, bg = a // g, b // g
            ra, rb = rows[r], rows[i]
            ta, tb = track[r], track[i]
            rows[r] = [x * p + y * q for p, q in zip(ra, rb)]
            rows[i] = [-bg * p + ag * q for p, q in zip(ra, rb)]
            track[r] = [x * p + y * q for p, q in zip(ta, tb)]
            track[i] = [-bg * p + ag * q for p, q in zip(ta, tb)]
        if rows[r][c] != 0:
            r += 1
    return r


def hnf_rows(vectors: Sequence[Sequence[int]]) -> list[list[int]]:
    """Canonical row Hermite normal form of the row lattice spanned by ``vectors``.

    Pivots are positive and entries above each pivot are reduced into [0, pivot).
    Zero rows are dropped.
    """
    rows = [[int(x) for x in v] for v in vectors]
    if not rows:
        return []
    dummy = [[0] for _ in rows]
    k = _integer_row_reduce(rows, dummy)
    rows = rows[:k]
    pivcols = []
    for i, row in enumerate(rows):
        c = next(j for j, x in enumerate(row) if x != 0)
        if row[c] < 0:
            rows[i] = row = [-x for x in row]
        pivcols.append(c)
    for i, c in enumerate(pivcols):
        p = rows[i][c]
        for k2 in range(i):
            q = rows[k2][c] // p
            if q:
                rows[k2] = [x - q * y for x, y in zip(rows[k2], rows[i])]
    return rows


def integer_kernel(a: Sequence[Sequence], ncols: int | None = None) -> list[list[int]]:
    """Z-basis of {x in Z^n : a x = 0}, returned in row HNF.

    Rows of ``a`` may be rational; they are scaled to integers first. The
    kernel of an integer matrix inside Z^n is automatically saturated.
    """
    if not a:
        n = ncols or 0
        return [[int(i == j) for j in range(n)] for i in range(n)]
    n = len(a[0])
    int_rows = []
    for row in a:
        d = lcm_denominator(row)
        int_rows.append([int(frac(x) * d) for x in row])
    at = transpose(int_rows)  # n x m
    track = [[int(i == j) for j in range(n)] for i in range(n)]
    r = _integer_row_reduce(at, track)
    return hnf_rows(track[r:])


def unimodular_with_first_column(c: Sequence[int]) -> list[list[int]]:
    """Unimodular integer matrix whose first column is the primitive vector ``c``."""
    k = len(c)
    rows = [[int(x)] for x in c]
    track = [[int(i == j) for j in range(k)] for i in range(k)]
    _integer_row_reduce(rows, track)
    g = rows[0][0]
    if abs(g) != 1:
        raise ValueError("vector is not primitive")
    # track * c = g e_1, so c = g * track^{-1} e_1.
    inv = inverse(track)
    b = [[int(x) for x in row] for row in inv]
    if g == -1:
        for row in b:
            row[0] = -row[0]
    return b


def signature(g: Sequence[Sequence]) -> tuple[int, int, int]:
    """(positive, negative, zero) inertia of a symmetric rational matrix.

    Exact symmetric elimination: diagonal pivots when available, otherwise a
    congruence ``e_i -> e_i + e_j`` creates one from an off-diagonal entry.
    """
    m = as_matrix(g)
    n = len(m)
    pos = neg = 0
    active = list(range(n))
    while active:
        piv = next((i for i in active if m[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in active for j in active if i < j and m[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            for k in range(n):
                m[i][k] += m[j][k]
            for k in range(n):
                m[k][i] += m[k][j]
            piv = i
        d = m[piv][piv]
        if d > 0:
            pos += 1
        else:
            neg += 1
        active.remove(piv)
        for i in active:
            if m[i][piv] != 0:
                f = m[i][piv] / d
                for k in active:
                    m[i][k] -= f * m[piv][k]
        for i in active:
            m[i][piv] = m[piv][i] = Fraction(0)
    return pos, neg, n - pos - neg


def is_negative_definite(g: Sequence[Sequence]) -> bool:
    n = len(g)
    return n == 0 or signature(g) == (0, n, 0)


def is_positive_definite(g: Sequence[Sequence]) -> bool:
    n = len(g)
    return n == 0 or signature(g) == (n, 0, 0)


def is_symmetric(g: Sequence[Sequence]) -> bool:
    return all(g[i][j] == g[j][i] for i in range(len(g)) for j in range(i))
