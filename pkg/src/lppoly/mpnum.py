"""Extended-precision arithmetic kernel and precision policy.

Every real quantity in this package is an MPFR binary float (``gmpy2.mpfr``),
rounded at a pipeline-global working precision that is chosen once from the
steepest error law in the experiment plan.  This module sizes that precision,
switches the ambient gmpy2 context, and moves values through decimal strings
without precision loss.

``exp`` and ``log`` are computed with 32 guard bits and returned unrounded,
so that composed calls (``exp(log(x))``, ``exp((s - T)/alpha)`` with large
``T``) stay faithful at the working precision instead of losing
``log2(|argument|)`` bits to the intermediate rounding.  The guard bits
disappear at the next arithmetic operation, which rounds into the ambient
context as usual.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

import gmpy2
from gmpy2 import mpfr

__all__ = [
    "BigReal",
    "PrecisionPolicy",
    "MIN_PRECISION_BITS",
    "DEFAULT_GUARD_BITS",
    "required_precision",
    "workprec",
    "current_precision",
    "mpf",
    "pi",
    "exp",
    "log",
    "to_decimal",
    "from_decimal",
    "decimal_digits_for",
]

#: The universal scalar type of this package.
BigReal = mpfr

MIN_PRECISION_BITS = 128
DEFAULT_GUARD_BITS = 64

_TRANSCENDENTAL_GUARD_BITS = 32

_DECIMAL_RE = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")


@dataclass(frozen=True)
class PrecisionPolicy:
    """Precision request derived from a root-exponential error target.

    ``target_exponent_rho`` is the rho of an ``e**(-rho*sqrt(N))`` error law
    and ``n_max`` the largest N in the plan.  ``guard_bits`` absorbs
    cancellation in partial-fraction sums of ~10^3 terms.
    """

    target_exponent_rho: float
    n_max: int
    guard_bits: int = DEFAULT_GUARD_BITS


def required_precision(policy: PrecisionPolicy) -> int:
    """Mantissa bits needed so the error floor sits below the target law.

    Returns ``max(128, ceil(rho*sqrt(n_max)*log2(e)) + guard_bits)``.
    """
    rho = policy.target_exponent_rho
    if not rho >= 0:
        raise ValueError(f"invalid precision policy: rho must be >= 0, got {rho}")
    if policy.n_max < 1:
        raise ValueError(f"invalid precision policy: n_max must be >= 1, got {policy.n_max}")
    if policy.guard_bits < 0:
        raise ValueError(f"invalid precision policy: guard_bits must be >= 0, got {policy.guard_bits}")
    with gmpy2.context(precision=96):
        nats = mpf(rho) * gmpy2.sqrt(mpfr(policy.n_max))
        bits = int(gmpy2.ceil(nats / gmpy2.log(mpfr(2)))) + policy.guard_bits
    return max(MIN_PRECISION_BITS, bits)


def workprec(bits: int):
    """Context manager switching the ambient working precision.

    All mpfr arithmetic inside the block rounds to ``bits`` mantissa bits.
    """
    if bits < 2:
        raise ValueError(f"working precision must be >= 2 bits, got {bits}")
    return gmpy2.context(precision=int(bits))


def current_precision() -> int:
    """Mantissa bits of the ambient working precision."""
    return gmpy2.get_context().precision


def mpf(value) -> mpfr:
    """Construct a BigReal at the working precision.

    Accepts int, float, str, Fraction, mpq and mpfr.  Strings follow exact
    decimal semantics (nearest representable value); Fractions convert with
    one correct rounding.
    """
    if isinstance(value, Fraction):
        value = gmpy2.mpq(value.numerator, value.denominator)
    return mpfr(value)


def pi() -> mpfr:
    """Pi at the working precision."""
    return gmpy2.const_pi()


_boost_cache: dict[int, object] = {}


def _boost_context():
    bits = gmpy2.get_context().precision + _TRANSCENDENTAL_GUARD_BITS
    ctx = _boost_cache.get(bits)
    if ctx is None:
        ctx = gmpy2.context(precision=bits)
        _boost_cache[bits] = ctx
    return ctx


def exp(x) -> mpfr:
    """e**x with guard bits (see module docstring)."""
    return _boost_context().exp(mpfr(x))


def log(x) -> mpfr:
    """Natural log with guard bits (see module docstring)."""
    return _boost_context().log(mpfr(x))


def decimal_digits_for(bits: int) -> int:
    """Significant decimal digits that round-trip ``bits`` of mantissa."""
    return int(gmpy2.ceil(mpfr(bits) * mpfr("0.302"))) + 2


def to_decimal(x, digits: int) -> str:
    """Scientific-notation decimal string with exactly ``digits`` significant digits.

    Round-to-nearest; the exponent carries no plus sign or leading zeros,
    e.g. ``to_decimal(mpf(-0.5), 3) == "-5.00e-1"``.
    """
    if digits < 1:
        raise ValueError(f"digits must be >= 1, got {digits}")
    x = mpfr(x)
    if not gmpy2.is_finite(x):
        raise ValueError(f"cannot serialize non-finite value {x!r}")
    if x == 0:
        mantissa, exp10 = "0" * digits, 0
        sign = ""
    else:
        ds, e, _ = x.digits(10, digits)
        sign = "-" if ds.startswith("-") else ""
        mantissa = ds.lstrip("-")
        # mpfr.digits may round a ...999 mantissa up a decade, keeping the
        # convention value = 0.<mantissa> * 10**e; length stays `digits`.
        mantissa = mantissa.ljust(digits, "0")
        exp10 = e - 1
    if digits == 1:
        return f"{sign}{mantissa}e{exp10}"
    return f"{sign}{mantissa[0]}.{mantissa[1:]}e{exp10}"


def from_decimal(s: str, bits: int) -> mpfr:
    """Nearest mpfr at ``bits`` precision to a signed decimal/scientific literal."""
    if bits < 2:
        raise ValueError(f"precision must be >= 2 bits, got {bits}")
    text = s.strip()
    if not _DECIMAL_RE.match(text):
        raise ValueError(f"not a decimal literal: {s!r}")
    return mpfr(text, int(bits))
