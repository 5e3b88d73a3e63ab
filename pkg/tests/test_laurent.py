"""Laurent polynomial arithmetic, RNG determinism, coefficient assignments."""

from fractions import Fraction

import pytest

from doublemirror.errors import InputError
from doublemirror.laurent import (
    RATIONAL,
    CoefficientAssignment,
    LaurentPoly,
    SplitMix64,
    fp_inv,
    is_prime,
)


class TestSplitMix:
    def test_deterministic(self):
        a = SplitMix64(42)
        b = SplitMix64(42)
        assert [a.next_u64() for _ in range(5)] == [b.next_u64() for _ in range(5)]

    def test_nonzero_mod(self):
        rng = SplitMix64(0)
        vals = [rng.nonzero_mod(7) for _ in range(200)]
        assert all(1 <= v <= 6 for v in vals)
        assert len(set(vals)) == 6


class TestPrimeHelpers:
    def test_is_prime(self):
        assert is_prime(10007) and is_prime(65537) and is_prime(101)
        assert not is_prime(10006) and not is_prime(1)

    def test_fp_inv(self):
        for x in (1, 2, 5000, 10006):
            assert x * fp_inv(x, 10007) % 10007 == 1


class TestLaurentPoly:
    def test_add_mul_rational(self):
        f = LaurentPoly.from_dict(2, {(1, 0): 2, (0, -1): 3}, RATIONAL)
        g = LaurentPoly.from_dict(2, {(0, 1): 1}, RATIONAL)
        h = f * g
        assert h.as_dict() == {(1, 1): Fraction(2), (0, 0): Fraction(3)}
        assert (f + f).as_dict() == {(1, 0): Fraction(4), (0, -1): Fraction(6)}
        assert (f - f).is_zero()

    def test_zero_pruning(self):
        f = LaurentPoly.from_dict(1, {(0,): 1}, RATIONAL)
        g = LaurentPoly.from_dict(1, {(0,): -1}, RATIONAL)
        assert (f + g).terms == ()

    def test_shift(self):
        f = LaurentPoly.from_dict(1, {(2,): 5}, RATIONAL)
        assert f.shift((-3,)).as_dict() == {(-1,): Fraction(5)}

    def test_evaluate_fp(self):
        p = 10007
        f = LaurentPoly.from_dict(2, {(1, 0): 1, (-1, 1): 1}, p)
        # f(x, y) = x + y/x
        x, y = 3, 5
        expected = (x + y * fp_inv(x, p)) % p
        assert f.evaluate((x, y)) == expected

    def test_evaluate_rational(self):
        f = LaurentPoly.from_dict(1, {(-2,): 1}, RATIONAL)
        assert f.evaluate((Fraction(2),)) == Fraction(1, 4)

    def test_log_derivative(self):
        p = 10007
        # f = x^2 y^-1: x df/dx = 2 x^2 y^-1
        f = LaurentPoly.from_dict(2, {(2, -1): 1}, p)
        x, y = 4, 7
        val = f.log_derivative_eval((x, y), 0)
        expected = 2 * pow(x, 2, p) * fp_inv(y, p) % p
        assert val == expected

    def test_restrict_to_line(self):
        p = 101
        f = LaurentPoly.from_dict(2, {(2, 1): 3, (-1, 1): 4, (0, 0): 5}, p)
        offset, coeffs = f.restrict_to_line((None, 2), 0)
        # 3*2*t^2 + 4*2*t^-1 + 5 -> t^-1 * (8 + 5t + 0 t^2 + 6 t^3)
        assert offset == -1
        assert coeffs == [8, 5, 0, 6]

    def test_exponent_range(self):
        f = LaurentPoly.from_dict(2, {(2, 1): 3, (-1, 5): 4}, RATIONAL)
        assert f.exponent_range(0) == (-1, 2)
        assert f.exponent_range(1) == (1, 5)


class TestCoefficients:
    def test_random_deterministic(self):
        keys = [(0, 1), (1, 0), (2, 2)]
        a = CoefficientAssignment.random(keys, 10007, 5)
        b = CoefficientAssignment.random(list(reversed(keys)), 10007, 5)
        assert a.values == b.values
        assert all(v != 0 for v in a.values.values())

    def test_rational_mode(self):
        keys = [(0,), (1,)]
        a = CoefficientAssignment.random(keys, RATIONAL, 1)
        assert all(isinstance(v, Fraction) and v != 0 for v in a.values.values())

    def test_explicit_rejects_zero(self):
        with pytest.raises(InputError):
            CoefficientAssignment.explicit({(0, 0): 0}, RATIONAL)

    def test_missing_key(self):
        a = CoefficientAssignment.random([(0,)], RATIONAL, 0)
        with pytest.raises(InputError):
            a.value((9,))
