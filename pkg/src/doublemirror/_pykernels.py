"""Numpy fallback for the hot finite-field kernels.

Selected by ``fpkernels`` when the compiled extension is unavailable (or when
``DOUBLEMIRROR_PURE=1``).  The root scan is vectorized Horner evaluation over
all of F_p*; products stay below 2**34 for the primes used here, far inside
int64 range.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def scan_roots(coeffs, p):
    """Roots in F_p* of ``sum coeffs[k] t**k``, ascending.

    ``coeffs`` is a list of ints already reduced mod p.
    """
    if p >= 1 << 31:
        raise ValueError("prime too large for the int64 scan")
    ts = np.arange(1, p, dtype=np.int64)
    acc = np.zeros(p - 1, dtype=np.int64)
    for c in reversed(coeffs):
        acc = (acc * ts + int(c) % p) % p
    return [int(t) for t in ts[acc == 0]]


def eval_poly_many(coeffs, points, p):
    """Horner evaluation of one polynomial at many points of F_p."""
    ts = np.asarray(points, dtype=np.int64)
    acc = np.zeros(len(points), dtype=np.int64)
    for c in reversed(coeffs):
        acc = (acc * ts + int(c) % p) % p
    return [int(v) for v in acc]
