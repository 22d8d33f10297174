"""Convergence and quadrature-error studies with exponent extraction.

``run_convergence`` reproduces the sup-error-versus-N studies for any
scheme/axis family; ``run_quaderr`` measures the rectangular-rule error
I - S without the pole machinery.  ``fit_exponent`` pulls the observed rho
out of an e**(-rho*sqrt(N)) law by least squares on ln(err) against sqrt(N);
convergence records fit against N = N1 + N2, quadrature records against N1.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import gmpy2
from gmpy2 import mpfr

from . import mpnum
from .builder import N2Rule, build_lp, n2_rule
from .evaluator import error_grid, sup_error
from .mpnum import mpf
from .oracle import OracleError, quad_error
from .scheme import Axis, Kind, make_params
from .theory import best_sigma, predicted_exponent, stahl_limit

__all__ = [
    "ConvergenceRecord",
    "QuadErrRecord",
    "FitResult",
    "InsufficientDataError",
    "run_convergence",
    "run_quaderr",
    "fit_exponent",
    "normalize_by_stahl",
    "default_fit_floor",
    "QUADERR_GRID",
]

#: Default (n_log, n_lin) for the quadrature-error grid; each point costs a
#: panel-doubled reference integral, so this is kept leaner than the
#: convergence default.
QUADERR_GRID = (120, 24)


@dataclass(frozen=True)
class ConvergenceRecord:
    """One (configuration, n1) cell of a convergence study."""

    kind: Kind
    axis: Axis
    alpha: mpfr
    sigma: mpfr
    n1: int
    n2: int
    n: int
    sup_err: mpfr
    argmax_x: mpfr
    predicted_rho: mpfr
    normalized: mpfr     # e**(predicted_rho*sqrt(n)) * sup_err / stahl_limit


@dataclass(frozen=True)
class QuadErrRecord:
    kind: Kind
    alpha: mpfr
    sigma: mpfr
    n1: int
    sup_quad_err: mpfr


@dataclass(frozen=True)
class FitResult:
    rho_hat: mpfr
    intercept: mpfr
    points_used: int
    residual_rms: mpfr


class InsufficientDataError(ValueError):
    """Fewer than three points survived the fit floor."""


def _resolve_n2(n1: int, step, n2_mode, kind: Kind) -> int:
    if isinstance(n2_mode, int):
        return n2_mode
    if n2_mode in (N2Rule.FIG, "fig"):
        return n2_rule(n1, step, N2Rule.FIG, kind)
    if n2_mode in (N2Rule.BOUND, "bound"):
        return n2_rule(n1, step, N2Rule.BOUND, kind)
    raise ValueError(f"n2_mode must be 'fig', 'bound' or an int, got {n2_mode!r}")


def run_convergence(kind: Kind, axis: Axis, alpha, n1_list, sigma="best",
                    n2_mode="fig", c_shift=1, n_log: int = 1000,
                    n_lin: int = 200) -> list[ConvergenceRecord]:
    """Build and measure one approximant per n1; deterministic ordering.

    ``sigma="best"`` resolves the rate-maximizing value for the scheme kind.
    """
    n1_list = list(n1_list)
    if not n1_list or any(b <= a for a, b in zip(n1_list, n1_list[1:])):
        raise ValueError("n1_list must be nonempty and strictly ascending")
    s = best_sigma(kind, alpha) if isinstance(sigma, str) and sigma == "best" else mpf(sigma)
    model = predicted_exponent(kind, alpha, s)
    records = []
    for n1 in n1_list:
        try:
            probe = make_params(kind, axis, alpha, s, c_shift, n1, 0)
            n2 = _resolve_n2(n1, probe.step, n2_mode, kind)
            p = make_params(kind, axis, alpha, s, c_shift, n1, n2)
            approx = build_lp(p)
            rep = sup_error(approx, error_grid(p, n_log, n_lin))
        except OracleError:
            raise
        except Exception as e:
            raise RuntimeError(f"convergence cell n1={n1} failed: {e}") from e
        records.append(ConvergenceRecord(
            kind=kind, axis=axis, alpha=p.alpha, sigma=s, n1=n1, n2=n2,
            n=n1 + n2, sup_err=rep.max_err, argmax_x=rep.argmax_x,
            predicted_rho=model.exponent_rho, normalized=mpfr(0)))
    records.sort(key=lambda r: (r.alpha, r.sigma, r.n1))
    return normalize_by_stahl(records)


def run_quaderr(kind: Kind, alpha, sigma, n1_list, n_log: int = QUADERR_GRID[0],
                n_lin: int = QUADERR_GRID[1]) -> list[QuadErrRecord]:
    """Sup of |I - S| (resp. the uniform pair) over the error grid, per n1."""
    n1_list = list(n1_list)
    if not n1_list or any(b <= a for a, b in zip(n1_list, n1_list[1:])):
        raise ValueError("n1_list must be nonempty and strictly ascending")
    s = best_sigma(kind, alpha) if isinstance(sigma, str) and sigma == "best" else mpf(sigma)
    records = []
    for n1 in n1_list:
        try:
            p = make_params(kind, Axis.REAL, alpha, s, 1, n1, 0)
            grid = error_grid(p, n_log, n_lin)
            worst = mpfr(0)
            for x in grid.points:
                worst = max(worst, abs(quad_error(x, p)))
        except OracleError:
            raise
        except Exception as e:
            raise RuntimeError(f"quadrature cell n1={n1} failed: {e}") from e
        records.append(QuadErrRecord(kind=kind, alpha=p.alpha, sigma=s, n1=n1,
                                     sup_quad_err=worst))
    records.sort(key=lambda r: (r.alpha, r.sigma, r.n1))
    return records


def default_fit_floor() -> mpfr:
    """Errors below 2**-(bits/2) sit too close to roundoff to inform a rate fit."""
    return mpfr(2) ** (-(mpnum.current_precision() // 2))


def fit_exponent(points, floor) -> FitResult:
    """Least-squares line of ln(err) against sqrt(n); rho_hat = -slope.

    ``points`` are (n, err) pairs; pairs with err <= floor are dropped and at
    least three must survive.
    """
    floor = mpf(floor)
    usable = [(n, mpf(e)) for n, e in points if mpf(e) > floor]
    if len(usable) < 3:
        raise InsufficientDataError(
            f"need >= 3 points above the floor {floor}, have {len(usable)}")
    xs = [gmpy2.sqrt(mpfr(n)) for n, _ in usable]
    ys = [mpnum.log(e) for _, e in usable]
    m = len(usable)
    mean_x = sum(xs) / m
    mean_y = sum(ys, mpfr(0)) / m
    sxx = sum((x - mean_x) ** 2 for x in xs)
    sxy = sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys))
    slope = sxy / sxx
    intercept = mean_y - slope * mean_x
    rss = sum((y - (intercept + slope * x)) ** 2 for x, y in zip(xs, ys))
    return FitResult(rho_hat=-slope, intercept=intercept, points_used=m,
                     residual_rms=gmpy2.sqrt(rss / m))


def normalize_by_stahl(records: list[ConvergenceRecord]) -> list[ConvergenceRecord]:
    """Fill ``normalized`` = e**(rho*sqrt(n)) * sup_err / stahl_limit(alpha)."""
    out = []
    for r in records:
        g = stahl_limit(r.alpha)
        norm = mpnum.exp(r.predicted_rho * gmpy2.sqrt(mpfr(r.n))) * r.sup_err / g
        out.append(replace(r, normalized=mpfr(norm)))
    return out
