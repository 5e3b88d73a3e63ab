"""Backend parity for the finite-field kernels."""

import random

import pytest

from doublemirror import _pykernels, fpkernels


def reference_roots(coeffs, p):
    roots = []
    for t in range(1, p):
        acc = 0
        for c in reversed(coeffs):
            acc = (acc * t + c) % p
        if acc == 0:
            roots.append(t)
    return roots


try:
    from doublemirror import _speedups
except ImportError:
    _speedups = None


IMPLS = [("python", _pykernels)] + ([("cython", _speedups)] if _speedups else [])


@pytest.mark.parametrize("name,impl", IMPLS)
class TestKernels:
    def test_known_roots(self, name, impl):
        p = 101
        # (t - 3)(t - 7) = t^2 - 10t + 21
        coeffs = [21, -10 % p, 1]
        assert impl.scan_roots(coeffs, p) == [3, 7]

    def test_matches_reference(self, name, impl):
        p = 211
        rng = random.Random(5)
        for _ in range(20):
            coeffs = [rng.randrange(p) for _ in range(rng.randint(1, 8))]
            assert impl.scan_roots(coeffs, p) == reference_roots(coeffs, p)

    def test_eval_many(self, name, impl):
        p = 10007
        coeffs = [5, 0, 3]
        points = [1, 2, 3, p - 1]
        expected = [(5 + 3 * t * t) % p for t in points]
        assert impl.eval_poly_many(coeffs, points, p) == expected


def test_backends_agree_if_compiled():
    if _speedups is None:
        pytest.skip("compiled extension unavailable")
    p = 10007
    rng = random.Random(1)
    coeffs = [rng.randrange(p) for _ in range(40)]
    assert _speedups.scan_roots(coeffs, p) == _pykernels.scan_roots(coeffs, p)


def test_dispatcher_exports():
    assert callable(fpkernels.scan_roots)
    assert fpkernels.BACKEND in ("cython", "python")
