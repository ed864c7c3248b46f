# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Fincke-Pohst kernel.

Pruning uses doubles widened by a safety margin; every emitted vector is
re-checked with exact 64-bit integer arithmetic, so the output is exact
provided the caller has verified the int64 bounds (see kernels.__init__).
"""

from libc.math cimport sqrt, floor, ceil
from libc.stdlib cimport malloc, free

from ..errors import EnumerationLimit


cdef struct State:
    int n
    double *d
    double *mu      # n x n, row-major, mu[i*n+j] for j > i
    double *t       # center
    long long *g    # exact gram, n x n
    long long *p    # scaled center numerators
    long long q     # common center denominator
    long long target_scaled
    double eps
    long long *y
    long long visited
    long long limit
    int overflow


cdef long long exact_norm(State *st):
    cdef int a, b, n = st.n
    cdef long long za, acc = 0, inner
    for a in range(n):
        za = st.q * st.y[a] + st.p[a]
        if za == 0:
            continue
        inner = 0
        for b in range(n):
            inner += st.g[a * n + b] * (st.q * st.y[b] + st.p[b])
        acc += za * inner
    return acc


cdef int rec(State *st, int i, double remaining, list out) except -1:
    cdef int j, n = st.n
    cdef double u = st.t[i]
    cdef double s, r, rest
    cdef long long lo, hi, yi
    for j in range(i + 1, n):
        u += st.mu[i * n + j] * (st.y[j] + st.t[j])
    s = remaining / st.d[i]
    if s < 0:
        s = 0
    r = sqrt(s)
    lo = <long long>ceil(-u - r - st.eps)
    hi = <long long>floor(-u + r + st.eps)
    yi = lo
    while yi <= hi:
        st.visited += 1
        if st.visited > st.limit:
            raise EnumerationLimit("enumeration exceeded %d nodes" % st.limit)
        st.y[i] = yi
        rest = remaining - st.d[i] * (yi + u) * (yi + u)
        if i == 0:
            if exact_norm(st) == st.target_scaled:
                out.append(tuple([st.y[j] for j in range(n)]))
        elif rest > -st.eps:
            rec(st, i - 1, rest, out)
        yi += 1
    st.y[i] = 0
    return 0


def enumerate_shifted(list gram, list d, list mu, list center_float,
                      list center_num, long long denom, long long target_scaled,
                      double target, long long limit):
    """Vectors y with (q y + p)^T G (q y + p) == target_scaled.

    ``d``/``mu`` is the LDL data of G as doubles, ``center_float`` = p / q.
    """
    cdef int n = len(gram)
    cdef int i, j
    cdef State st
    out = []
    if n == 0:
        return out
    st.n = n
    st.d = <double *>malloc(n * sizeof(double))
    st.mu = <double *>malloc(n * n * sizeof(double))
    st.t = <double *>malloc(n * sizeof(double))
    st.g = <long long *>malloc(n * n * sizeof(long long))
    st.p = <long long *>malloc(n * sizeof(long long))
    st.y = <long long *>malloc(n * sizeof(long long))
    try:
        for i in range(n):
            st.d[i] = d[i]
            st.t[i] = center_float[i]
            st.p[i] = center_num[i]
            st.y[i] = 0
            for j in range(n):
                st.mu[i * n + j] = mu[i][j]
                st.g[i * n + j] = gram[i][j]
        st.q = denom
        st.target_scaled = target_scaled
        st.eps = 1e-7 * (1.0 + abs(target))
        st.visited = 0
        st.limit = limit
        rec(&st, n - 1, target + st.eps, out)
    finally:
        free(st.d)
        free(st.mu)
        free(st.t)
        free(st.g)
        free(st.p)
        free(st.y)
    out.sort()
    return out
