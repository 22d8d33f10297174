"""Closed-form rate predictors and analysis constants.

Everything here is a pure function of (alpha, sigma, T): the two-branch
root-exponential rate laws and their optimal clustering strengths, the
minimax limit constant, the monotonicity threshold (u*, gamma, x*) below
which the rectangular sum is a guaranteed underestimate, the pole-distance
kernel bounds, and the integer prefactor parameter M0.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import gmpy2
from gmpy2 import mpfr

from . import mpnum
from .mpnum import mpf
from .scheme import Kind

__all__ = [
    "Regime",
    "RateModel",
    "SingularityInfo",
    "QBound",
    "TruncationBounds",
    "predicted_exponent",
    "best_sigma",
    "stahl_limit",
    "u_star",
    "g_of_u",
    "x_star",
    "m_zero",
    "q_bounds",
    "integrand_pole",
    "trunc_bounds",
]


class Regime(enum.Enum):
    SATURATED = "saturated"              # window-truncation branch, rate sigma*alpha
    QUADRATURE_LIMITED = "quadrature"    # pole-distance branch, rate c*pi**2/sigma
    BOUNDARY = "boundary"                # both branches equal (best sigma)


@dataclass(frozen=True)
class RateModel:
    kind: Kind
    alpha: mpfr
    sigma: mpfr
    exponent_rho: mpfr   # error ~ e**(-rho*sqrt(N))
    regime: Regime


@dataclass(frozen=True)
class SingularityInfo:
    """Threshold data of the integrand-monotonicity region.

    x_star = g(u_star) = e**((gamma - T)/alpha); the rectangular sum is a
    lower Riemann sum of the integral for all x in [0, x_star].
    """

    u_star: mpfr
    gamma: mpfr
    x_star: mpfr
    alpha: mpfr
    t_cap: mpfr


@dataclass(frozen=True)
class QBound:
    """Bounds of Q(x) = x**alpha/(e**(2*pi*a/h) - 1) on [x*, 1].

    ``x_min`` is the interior minimizer, present only when eta < 1.
    """

    eta: mpfr
    lower: mpfr
    upper: mpfr
    x_min: mpfr | None


@dataclass(frozen=True)
class TruncationBounds:
    e1: mpfr       # window truncation of the integral representation: 2*e**-T
    e_full: mpfr   # truncation after extending to the node window: 3*e**-T


def _near(x: mpfr, target) -> bool:
    """True when x is within a few ulp of ``target``.

    Boundary parameters (sigma = best sigma, hence eta = 1 or equal rate
    branches) are exact identities in the algebra but carry rounding noise
    once sigma itself has been rounded; case splits must not flip on it.
    """
    t = mpf(target)
    tol = max(abs(t), mpfr(1)) * mpfr(2) ** (8 - mpnum.current_precision())
    return abs(x - t) <= tol


def _snap_ceil(x: mpfr) -> int:
    n = gmpy2.rint(x)
    if abs(x - n) <= max(abs(x), mpfr(1)) * mpfr(2) ** (8 - mpnum.current_precision()):
        return int(n)
    return int(gmpy2.ceil(x))


def _quad_coeff(kind: Kind) -> int:
    return 4 if kind is Kind.TAPERED else 2


def predicted_exponent(kind: Kind, alpha, sigma) -> RateModel:
    """Two-branch rate law: rho = min(sigma*alpha, c*pi**2/sigma).

    c = 4 for tapered clustering, 2 for uniform; the branches cross at the
    best sigma, where the regime is reported as Boundary.
    """
    a = mpf(alpha)
    s = mpf(sigma)
    if not (0 < a < 1):
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    if not s > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    b_sat = s * a
    b_quad = _quad_coeff(kind) * mpnum.pi() ** 2 / s
    if _near(b_sat, b_quad):
        return RateModel(kind, a, s, min(b_sat, b_quad), Regime.BOUNDARY)
    if b_sat < b_quad:
        return RateModel(kind, a, s, b_sat, Regime.SATURATED)
    return RateModel(kind, a, s, b_quad, Regime.QUADRATURE_LIMITED)


def best_sigma(kind: Kind, alpha) -> mpfr:
    """Rate-maximizing clustering strength: 2*pi/sqrt(alpha) tapered, sqrt(2)*pi/sqrt(alpha) uniform."""
    a = mpf(alpha)
    if not (0 < a < 1):
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    num = 2 * mpnum.pi() if kind is Kind.TAPERED else gmpy2.sqrt(mpfr(2)) * mpnum.pi()
    return num / gmpy2.sqrt(a)


def stahl_limit(alpha) -> mpfr:
    """Sharp limit constant of best rational approximation: 4**(1+alpha)*sin(alpha*pi)."""
    a = mpf(alpha)
    return mpfr(4) ** (1 + a) * gmpy2.sin(a * mpnum.pi())


def u_star(alpha) -> mpfr:
    """Stationary point of g: (1 + (1-2a)*sqrt(4a - 4a**2 + 1)) / (2*(1-a)**2).

    Lies in (1, 4) and increases monotonically on alpha in (0, 1).
    """
    a = mpf(alpha)
    if not (0 < a < 1):
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    root = gmpy2.sqrt(4 * a - 4 * a * a + 1)
    return (1 + (1 - 2 * a) * root) / (2 * (1 - a) ** 2)


def g_of_u(u, alpha, t_cap) -> mpfr:
    """Monotonicity threshold g(u) = ((sqrt(u)/kappa + 1)/(sqrt(u) - 1)) * e**((sqrt(u)-T)/alpha)."""
    u = mpf(u)
    if not u > 1:
        raise ValueError(f"g is defined for u > 1, got {u}")
    a = mpf(alpha)
    t = mpf(t_cap)
    su = gmpy2.sqrt(u)
    kappa = a / (1 - a)
    return (su / kappa + 1) / (su - 1) * mpnum.exp((su - t) / a)


def x_star(alpha, t_cap) -> SingularityInfo:
    """Full threshold data; x_star = g(u_star) written as e**((gamma - T)/alpha)."""
    a = mpf(alpha)
    t = mpf(t_cap)
    us = u_star(a)
    su = gmpy2.sqrt(us)
    kappa = a / (1 - a)
    ratio = (su / kappa + 1) / (su - 1)
    gamma = su + a * mpnum.log(ratio)
    xs = mpnum.exp((gamma - t) / a)
    return SingularityInfo(u_star=us, gamma=gamma, x_star=mpfr(xs), alpha=a, t_cap=t)


def m_zero(sigma) -> int:
    """Prefactor parameter M0 = 2*max{sigma**2/4, 1 + ceil(9*pi**2/sigma**2), 2*ceil((1+sqrt(pi/sigma))**4)}.

    The first term is kept real through the outer doubling and the result
    ceiled, which is conservative for the e**(sigma*sqrt(2*M0)) prefactor.
    """
    s = mpf(sigma)
    if not s > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    r = mpnum.pi() / s
    t1 = s * s / 4
    t2 = mpfr(1 + _snap_ceil(9 * r * r))
    t3 = mpfr(2 * _snap_ceil((1 + gmpy2.sqrt(r)) ** 4))
    return _snap_ceil(2 * max(t1, t2, t3))


def q_bounds(alpha, sigma, t_cap) -> QBound:
    """Extremes of the pole-distance kernel Q(x) = x**alpha/(x**(eta*alpha)*e**(eta*T) - 1).

    eta = 4*pi**2/(sigma**2*alpha).  For eta >= 1, Q decreases from Q(x*) to
    Q(1); for eta < 1 it has an interior minimum at x_min and peaks at an
    endpoint.
    """
    a = mpf(alpha)
    s = mpf(sigma)
    t = mpf(t_cap)
    eta = (2 * mpnum.pi() / s) ** 2 / a
    if _near(eta, 1):
        eta = mpfr(1)
    gamma = x_star(a, t).gamma
    q_at_1 = 1 / gmpy2.expm1(eta * t)
    q_at_xstar = mpnum.exp(gamma - t) / gmpy2.expm1(eta * gamma)
    if eta >= 1:
        return QBound(eta=eta, lower=mpfr(q_at_1), upper=mpfr(q_at_xstar), x_min=None)
    lower = (1 - eta) ** (1 - 1 / eta) * mpnum.exp(-t) / eta
    x_min = ((1 - eta) ** (-1 / eta) * mpnum.exp(-t)) ** (1 / a)
    return QBound(eta=eta, lower=mpfr(lower), upper=max(mpfr(q_at_1), mpfr(q_at_xstar)),
                  x_min=mpfr(x_min))


def integrand_pole(k: int, x, alpha, t_cap) -> tuple[mpfr, mpfr]:
    """Location u_k(x) of the k-th integrand pole as (real, imaginary) parts.

    u_k = (T + alpha*log(x))**2 - (alpha*pi*(2k-1))**2
          + i*2*alpha*pi*(2k-1)*(T + alpha*log(x)),
    so k = 0 and k = 1 are the conjugate pair nearest the real axis, with
    imaginary parts -a and +a, a = 2*alpha*pi*(T + alpha*log(x)).
    """
    x = mpf(x)
    if not x > 0:
        raise ValueError(f"pole locations need x > 0, got {x}")
    a = mpf(alpha)
    t = mpf(t_cap)
    ell = t + a * mpnum.log(x)
    m = 2 * k - 1
    api_m = a * mpnum.pi() * m
    v = ell * ell - api_m * api_m
    w = 2 * api_m * ell
    return mpfr(v), mpfr(w)


def trunc_bounds(t_cap) -> TruncationBounds:
    """Analytic window-truncation bounds 2*e**-T and 3*e**-T."""
    t = mpf(t_cap)
    e = mpnum.exp(-t)
    return TruncationBounds(e1=mpfr(2 * e), e_full=mpfr(3 * e))
