import random

import gmpy2
import pytest
from gmpy2 import mpfr
from hypothesis import given, strategies as st

from helpers import ulps_between
from lppoly import mpnum
from lppoly.mpnum import (PrecisionPolicy, from_decimal, mpf, required_precision,
                          to_decimal, workprec)


def test_required_precision_floor():
    assert required_precision(PrecisionPolicy(0, 100, 64)) == 128


def test_required_precision_best_sigma_case():
    rho = 2 * 3.14159265358979323846 * 0.5 ** 0.5  # 2*pi*sqrt(0.5)
    assert required_precision(PrecisionPolicy(rho, 100, 64)) == 129


def test_required_precision_synthetic():
    assert required_precision(PrecisionPolicy(10, 400, 64)) == 353


def test_required_precision_rejects_bad_policy():
    with pytest.raises(ValueError):
        required_precision(PrecisionPolicy(-1, 100))
    with pytest.raises(ValueError):
        required_precision(PrecisionPolicy(1, 0))


def test_to_decimal_examples():
    assert to_decimal(mpf(1), 5) == "1.0000e0"
    with workprec(128):
        assert to_decimal(gmpy2.exp(mpf(1)), 10) == "2.718281828e0"
    assert to_decimal(mpf(-0.5), 3) == "-5.00e-1"
    assert to_decimal(mpf(0), 4) == "0.000e0"
    assert to_decimal(mpf("0.001234"), 2) == "1.2e-3"


def test_to_decimal_rejects_bad_input():
    with pytest.raises(ValueError):
        to_decimal(mpf(1), 0)
    with pytest.raises(ValueError):
        to_decimal(mpfr("inf"), 5)


def test_from_decimal_examples():
    with workprec(128):
        assert from_decimal("0", 128) == 0
        x = from_decimal("1e-40", 256)
        ref = mpfr(10, 300) ** -40
        assert x > 0
        assert ulps_between(x, ref, 256) <= 1


def test_from_decimal_rejects_junk():
    for bad in ("", "abc", "1.2.3", "1e", "inf", "nan", "0x10"):
        with pytest.raises(ValueError):
            from_decimal(bad, 128)


@given(st.integers(min_value=2 ** 255, max_value=2 ** 256 - 1),
       st.integers(min_value=-300, max_value=300),
       st.booleans())
def test_decimal_round_trip(mant, e2, neg):
    with workprec(256):
        x = mpfr(mant) * mpfr(2) ** e2
        if neg:
            x = -x
        back = from_decimal(to_decimal(x, 80), 256)
        assert ulps_between(back, x, 256) <= 1


def test_exp_log_round_trip_8ulp():
    rng = random.Random(20240817)
    with workprec(256):
        ln10 = gmpy2.log(mpfr(10))
        for _ in range(1000):
            x = mpnum.exp(mpfr(rng.uniform(-30.0, 30.0)) * ln10)
            x = mpfr(x)  # round into the working precision
            rt = mpnum.exp(mpnum.log(x))
            assert ulps_between(rt, x, 256) <= 8


def test_pow_matches_sqrt():
    rng = random.Random(7)
    with workprec(256):
        for _ in range(1000):
            x = mpfr(rng.uniform(1e-6, 1e6))
            assert ulps_between(x ** mpfr("0.5"), gmpy2.sqrt(x), 256) <= 8


def test_arithmetic_deterministic():
    def pipeline():
        with workprec(192):
            x = mpf("1.2345678901234567890")
            y = mpnum.exp(mpnum.log(gmpy2.sqrt(x))) * mpnum.pi()
            return to_decimal(y, 55)

    assert pipeline() == pipeline()


def test_workprec_nesting_restores():
    with workprec(128):
        assert mpnum.current_precision() == 128
        with workprec(300):
            assert mpnum.current_precision() == 300
        assert mpnum.current_precision() == 128


def test_decimal_digits_for():
    assert mpnum.decimal_digits_for(256) == 80
