"""Exact cyclotomic arithmetic."""

import math
import random
from fractions import Fraction

import mpmath
import pytest

from qtheta.cyclo import (CycloNumber, ZERO_FOREVER, cyclotomic_polynomial,
                          euler_phi, eval_terminating, root_weighted_sum)
from qtheta.errors import DivergenceError


def test_i_squared():
    z4 = CycloNumber.root_of_unity(4)
    assert z4 * z4 == -1


def test_third_roots_sum_to_zero():
    z3 = CycloNumber.root_of_unity(3)
    assert not (1 + z3 + z3 * z3)


def test_order_promotion_compatibility():
    z12 = CycloNumber.root_of_unity(12)
    z3 = CycloNumber.root_of_unity(3)
    assert (z12 * z12 * z12 * z12).promote(12) == z3.promote(12)
    assert z12 * z12 * z12 * z12 == z3  # promotion is implicit in equality


def test_cyclotomic_polynomial_basics():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)  # x^4 - x^2 + 1


def test_cyclotomic_degree_is_totient():
    for m in range(1, 201):
        assert len(cyclotomic_polynomial(m)) - 1 == euler_phi(m)


def test_root_annihilated_by_its_polynomial():
    for m in range(1, 101):
        z = CycloNumber.root_of_unity(m)
        acc = CycloNumber.zero(m)
        power = CycloNumber.one(m)
        for c in cyclotomic_polynomial(m):
            acc = acc + power * c
            power = power * z
        assert not acc, f"Phi_{m}(zeta_{m}) != 0"


def test_inverse_round_trip():
    rng = random.Random(7)
    for _ in range(20):
        m = rng.choice([3, 5, 8, 12, 20])
        coords = [Fraction(rng.randint(-4, 4), rng.randint(1, 5))
                  for _ in range(euler_phi(m))]
        x = CycloNumber.from_coords(m, coords)
        if not x:
            continue
        assert x * x.inv() == 1


def test_promotion_is_multiplicative():
    rng = random.Random(11)
    for _ in range(20):
        a = CycloNumber.from_coords(6, [rng.randint(-3, 3), rng.randint(-3, 3)])
        b = CycloNumber.from_coords(6, [rng.randint(-3, 3), rng.randint(-3, 3)])
        assert (a * b).promote(24) == a.promote(24) * b.promote(24)


def test_to_complex_precision():
    z4 = CycloNumber.root_of_unity(4)
    v = z4.to_complex(128)
    assert abs(complex(v) - 1j) < 1e-30
    assert complex(CycloNumber.zero().to_complex(64)) == 0


def test_weighted_sum_sqrt2():
    half_sqrt2 = root_weighted_sum(8, [(1, 1), (7, 1)], 2)
    assert abs(complex(half_sqrt2.to_complex(64)) - math.sqrt(2) / 2) < 1e-15


def test_eval_terminating_engine():
    # 1 + zeta + 0 forever at zeta = i
    z = CycloNumber.root_of_unity(4)

    def terms():
        yield CycloNumber.one()
        yield z
        yield ZERO_FOREVER

    assert eval_terminating(terms(), 10) == 1 + z
    with pytest.raises(DivergenceError):
        eval_terminating(iter([CycloNumber.one()] * 50), 20)


def test_terminating_matches_float_summation():
    # random terminating sums: exact evaluation vs 128-bit direct float sum
    rng = random.Random(3)
    for _ in range(10):
        m = rng.choice([5, 8, 12])
        z = CycloNumber.root_of_unity(m)
        coeffs = [rng.randint(-3, 3) for _ in range(12)]
        exact = CycloNumber.zero(m)
        power = CycloNumber.one(m)
        for c in coeffs:
            exact = exact + power * c
            power = power * z
        with mpmath.workdps(45):
            approx = mpmath.mpc(0)
            for k, c in enumerate(coeffs):
                approx += c * mpmath.expjpi(mpmath.mpf(2 * k) / m)
        assert abs(complex(exact.to_complex(128)) - complex(approx)) < 1e-25


def test_serialization_form():
    x = CycloNumber.from_coords(4, [Fraction(1, 2), Fraction(-3)])
    assert x.text() == "M=4; [1/2, -3]"
