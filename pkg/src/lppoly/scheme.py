"""Approximation-scheme configuration and the two quadrature integrands.

A ``SchemeParams`` freezes one configuration of the clustered-pole
construction for ``x**alpha``: the clustering strength ``sigma``, the pole
count ``n1``, the polynomial tail degree ``n2``, and the derived quadrature
quantities (step, window cap ``T = sigma*alpha*sqrt(n1)``, total node count).
The two integrands are the ones whose composite rectangular sums the pole
expansions reproduce exactly.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import gmpy2
from gmpy2 import mpfr

from . import mpnum
from .mpnum import mpf

__all__ = [
    "Kind",
    "Axis",
    "SchemeParams",
    "make_params",
    "integrand_f",
    "integrand_fbar",
    "sin_ratio",
    "ALPHA_MIN",
    "ALPHA_MAX",
]


class Kind(enum.Enum):
    TAPERED = "tapered"
    UNIFORM = "uniform"


class Axis(enum.Enum):
    REAL = "real"
    IMAG = "imag"


# kappa = alpha/(1-alpha) and 1/kappa both stay within ~50 on this range;
# outside it intermediate bounds overflow long before the schemes are useful.
ALPHA_MIN = Fraction(1, 50)
ALPHA_MAX = Fraction(49, 50)


@dataclass(frozen=True)
class SchemeParams:
    """One approximation configuration with all derived quantities.

    Immutable and hashable; freely shareable across workers.
    """

    kind: Kind
    axis: Axis
    alpha: mpfr
    alpha_frac: Fraction
    kappa: mpfr
    sigma: mpfr
    c_shift: mpfr
    n1: int
    n2: int
    step: mpfr       # h = (sigma*alpha)**2 tapered, hbar = sigma*alpha/sqrt(n1) uniform
    t_cap: mpfr      # T = sigma*alpha*sqrt(n1)
    n_total: int     # quadrature node count N_t (tapered) or Nbar_t (uniform)


def _as_fraction(alpha) -> Fraction:
    if isinstance(alpha, Fraction):
        return alpha
    if isinstance(alpha, str):
        return Fraction(alpha)
    if isinstance(alpha, int):
        return Fraction(alpha)
    if isinstance(alpha, float):
        return Fraction(alpha)
    if isinstance(alpha, mpfr):
        q = gmpy2.mpq(alpha)
        return Fraction(int(q.numerator), int(q.denominator))
    raise TypeError(f"unsupported alpha type {type(alpha).__name__}")


def make_params(kind: Kind, axis: Axis, alpha, sigma, c_shift=1, n1: int = 25,
                n2: int = 0) -> SchemeParams:
    """Build a SchemeParams, populating all derived fields.

    ``alpha`` may be a Fraction, decimal string, float, int or mpfr; it is
    kept exactly as a rational so the node-count ceilings are exact.
    ``sigma`` and ``c_shift`` are rounded at the working precision.
    """
    af = _as_fraction(alpha)
    if not (ALPHA_MIN <= af <= ALPHA_MAX):
        raise ValueError(f"alpha must lie in [{ALPHA_MIN}, {ALPHA_MAX}], got {af}")
    if n1 < 1:
        raise ValueError(f"n1 must be >= 1, got {n1}")
    if n2 < 0:
        raise ValueError(f"n2 must be >= 0, got {n2}")
    a = mpf(af)
    s = mpf(sigma)
    c = mpf(c_shift)
    if not s > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if not c > 0:
        raise ValueError(f"c_shift must be positive, got {c_shift}")

    # Derived reals keep 32 guard bits (like mpnum.exp/log) so identities with
    # exponent-scale amplification, e.g. p_j = -e**((sqrt(j*h)-T)/alpha), stay
    # faithful at the working precision; they round away at the next operation.
    with mpnum.workprec(mpnum.current_precision() + 32):
        kappa = a / (1 - a)
        sa = s * a
        sqrt_n1 = gmpy2.sqrt(mpfr(n1))
        t_cap = sa * sqrt_n1
        step = sa * sa if kind is Kind.TAPERED else sa / sqrt_n1
    # N_t = ceil(script_N + 1) with script_N an exact rational multiple of n1;
    # a float ceil here could tip over an exact integer boundary.
    one_minus = 1 - af
    if kind is Kind.TAPERED:
        n_total = math.ceil(Fraction(n1) / (one_minus * one_minus) + 1)
    elif kind is Kind.UNIFORM:
        n_total = math.ceil(Fraction(n1) / one_minus + 1)
    else:
        raise TypeError(f"kind must be a Kind, got {kind!r}")
    if not isinstance(axis, Axis):
        raise TypeError(f"axis must be an Axis, got {axis!r}")

    return SchemeParams(kind=kind, axis=axis, alpha=a, alpha_frac=af, kappa=kappa,
                        sigma=s, c_shift=c, n1=n1, n2=n2, step=step, t_cap=t_cap,
                        n_total=n_total)


def sin_ratio(p: SchemeParams) -> mpfr:
    """The prefactor sin(alpha*pi)/(alpha*pi) of the integral representation."""
    api = p.alpha * mpnum.pi()
    return gmpy2.sin(api) / api


def integrand_f(u, x, p: SchemeParams) -> mpfr:
    """Integrand of the tapered scheme after the square-root substitution.

    f(u, x) = sin_ratio/(2*sqrt(u)) * x*e**(sqrt(u)-T) / (e**((sqrt(u)-T)/alpha) + x).
    ``u = 0`` is a branch singularity when x > 0 and may not be sampled.
    """
    u = mpf(u)
    x = mpf(x)
    if x == 0:
        return mpf(0)
    if u == 0:
        raise ValueError("integrand_f is singular at u = 0 for x > 0")
    s = gmpy2.sqrt(u)
    d = s - p.t_cap
    num = x * mpnum.exp(d)
    den = mpnum.exp(d / p.alpha) + x
    return sin_ratio(p) * num / (den * 2 * s)


def integrand_fbar(u, x, p: SchemeParams) -> mpfr:
    """Integrand of the uniform scheme (no substitution; entire in u).

    fbar(u, x) = sin_ratio * x*e**(u-T) / (e**((u-T)/alpha) + x).
    """
    u = mpf(u)
    x = mpf(x)
    if x == 0:
        return mpf(0)
    d = u - p.t_cap
    num = x * mpnum.exp(d)
    den = mpnum.exp(d / p.alpha) + x
    return sin_ratio(p) * num / den
