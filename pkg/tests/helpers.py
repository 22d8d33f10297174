"""Shared numeric assertions for the test suite."""

import gmpy2
from gmpy2 import mpfr

from lppoly import mpnum


def ulp_at(x, bits=None) -> mpfr:
    """Size of one ulp in the binade of |x| at the given precision."""
    bits = bits or mpnum.current_precision()
    x = mpfr(x)
    if x == 0:
        return mpfr(2) ** (1 - bits)
    return mpfr(2) ** (gmpy2.get_exp(abs(x)) - bits)


def ulps_between(a, b, bits=None) -> mpfr:
    """Distance |a - b| measured in ulps of the larger operand."""
    bits = bits or mpnum.current_precision()
    a, b = mpfr(a), mpfr(b)
    with mpnum.workprec(bits + 64):
        d = abs(a - b)
    if d == 0:
        return mpfr(0)
    scale = max(abs(a), abs(b))
    return d / ulp_at(scale, bits)


def assert_close(a, b, ulps, bits=None, label=""):
    got = ulps_between(a, b, bits)
    assert got <= ulps, f"{label or 'values'} differ by {got} ulps (> {ulps}): {a} vs {b}"


def uniform_mpfr(rng, lo=0.0, hi=1.0) -> mpfr:
    """Deterministic pseudo-random point; the double converts exactly."""
    return mpfr(rng.uniform(lo, hi))
