# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled row echelon kernel on 64-bit integers.

Same pivoting rules as ``equitor._pycore.echelon``.  Any intermediate
overflow raises ``OverflowError`` and the caller retries with big integers.
"""

from libc.stdlib cimport malloc, free

cdef extern from *:
    """
    static inline int eq_mul_ovf(long long a, long long b, long long *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static inline int eq_sub_ovf(long long a, long long b, long long *r) {
        return __builtin_sub_overflow(a, b, r);
    }
    """
    int eq_mul_ovf(long long a, long long b, long long *r) nogil
    int eq_sub_ovf(long long a, long long b, long long *r) nogil

cdef long long LIMIT = 1LL << 62


cdef inline long long floordiv(long long a, long long b) nogil:
    cdef long long q = a / b
    if (a % b != 0) and ((a < 0) != (b < 0)):
        q -= 1
    return q


cdef int axpy(long long *dst, long long *src, long long q, Py_ssize_t start, Py_ssize_t stop) nogil:
    # dst -= q * src on [start, stop); returns 1 on overflow
    cdef Py_ssize_t j
    cdef long long t
    for j in range(start, stop):
        if src[j] != 0:
            if eq_mul_ovf(q, src[j], &t):
                return 1
            if eq_sub_ovf(dst[j], t, &dst[j]):
                return 1
            if dst[j] >= LIMIT or dst[j] <= -LIMIT:
                return 1
    return 0


cdef void swap_rows(long long *a, Py_ssize_t w, Py_ssize_t i, Py_ssize_t k) nogil:
    cdef Py_ssize_t j
    cdef long long t
    for j in range(w):
        t = a[i * w + j]
        a[i * w + j] = a[k * w + j]
        a[k * w + j] = t


cdef int run(long long *h, long long *u, Py_ssize_t m, Py_ssize_t n, bint transform,
             Py_ssize_t *pivots, Py_ssize_t *rank) nogil:
    cdef Py_ssize_t r = 0, c, i, j, p
    cdef long long x, ax, best, pv, q
    cdef bint clean
    for c in range(n):
        if r == m:
            break
        p = -1
        while True:
            p = -1
            best = 0
            for i in range(r, m):
                x = h[i * n + c]
                if x != 0:
                    ax = -x if x < 0 else x
                    if p < 0 or ax < best:
                        p = i
                        best = ax
            if p < 0:
                break
            if p != r:
                swap_rows(h, n, p, r)
                if transform:
                    swap_rows(u, m, p, r)
            pv = h[r * n + c]
            clean = True
            for i in range(r + 1, m):
                x = h[i * n + c]
                if x != 0:
                    q = floordiv(x, pv)
                    if axpy(&h[i * n], &h[r * n], q, c, n):
                        return 1
                    if transform and axpy(&u[i * m], &u[r * m], q, 0, m):
                        return 1
                    if h[i * n + c] != 0:
                        clean = False
            if clean:
                break
        if p < 0:
            continue
        if h[r * n + c] < 0:
            for j in range(c, n):
                h[r * n + j] = -h[r * n + j]
            if transform:
                for j in range(m):
                    u[r * m + j] = -u[r * m + j]
        pv = h[r * n + c]
        for i in range(r):
            q = floordiv(h[i * n + c], pv)
            if q != 0:
                if axpy(&h[i * n], &h[r * n], q, c, n):
                    return 1
                if transform and axpy(&u[i * m], &u[r * m], q, 0, m):
                    return 1
        pivots[r] = c
        r += 1
    rank[0] = r
    return 0


def echelon(a, transform=True):
    """Row Hermite normal form; see ``equitor._pycore.echelon``."""
    cdef Py_ssize_t m = len(a)
    cdef Py_ssize_t n = len(a[0]) if m else 0
    cdef Py_ssize_t i, j, rank = 0
    cdef long long *h = <long long *> malloc(max(m * n, 1) * sizeof(long long))
    cdef long long *u = <long long *> malloc(max(m * m, 1) * sizeof(long long))
    cdef Py_ssize_t *piv = <Py_ssize_t *> malloc(max(min(m, n), 1) * sizeof(Py_ssize_t))
    cdef int status
    cdef bint tr = transform
    if h == NULL or u == NULL or piv == NULL:
        free(h); free(u); free(piv)
        raise MemoryError()
    try:
        for i in range(m):
            row = a[i]
            for j in range(n):
                x = row[j]
                if x >= LIMIT or x <= -LIMIT:
                    raise OverflowError("entry too large for the compiled kernel")
                h[i * n + j] = x
        if tr:
            for i in range(m):
                for j in range(m):
                    u[i * m + j] = 1 if i == j else 0
        with nogil:
            status = run(h, u, m, n, tr, piv, &rank)
        if status:
            raise OverflowError("intermediate overflow in the compiled kernel")
        hh = [[h[i * n + j] for j in range(n)] for i in range(m)]
        uu = [[u[i * m + j] for j in range(m)] for i in range(m)] if tr else None
        return hh, uu, [piv[i] for i in range(rank)]
    finally:
        free(h)
        free(u)
        free(piv)
