# cython: language_level=3
"""Compiled finite-field kernels: dense root scan and batch evaluation.

The scan over all of F_p* is the dominant cost of determinantal sampling;
coefficient and point magnitudes stay below the primes used (< 2**31), so
int64 intermediates never overflow.
"""

BACKEND = "cython"


def scan_roots(coeffs, long long p):
    """Roots in F_p* of ``sum coeffs[k] t**k``, ascending."""
    cdef Py_ssize_t deg = len(coeffs)
    cdef Py_ssize_t i
    cdef long long t, acc
    cdef long long[::1] cs
    import array
    arr = array.array("q", [int(c) % p for c in coeffs])
    cs = arr
    roots = []
    for t in range(1, p):
        acc = 0
        for i in range(deg - 1, -1, -1):
            acc = (acc * t + cs[i]) % p
        if acc == 0:
            roots.append(t)
    return roots


def eval_poly_many(coeffs, points, long long p):
    """Horner evaluation of one polynomial at many points of F_p."""
    cdef Py_ssize_t deg = len(coeffs)
    cdef Py_ssize_t npts = len(points)
    cdef Py_ssize_t i, j
    cdef long long t, acc
    cdef long long[::1] cs
    cdef long long[::1] ps
    import array
    carr = array.array("q", [int(c) % p for c in coeffs])
    parr = array.array("q", [int(x) % p for x in points])
    cs = carr
    ps = parr
    out = []
    for j in range(npts):
        t = ps[j]
        acc = 0
        for i in range(deg - 1, -1, -1):
            acc = (acc * t + cs[i]) % p
        out.append(acc)
    return out
