"""Evaluation of approximants and sup-norm error measurement.

The approximation error peaks near the tiny threshold x* = e**((gamma-T)/alpha),
so uniform grids miss it; the default grid combines log-spaced points reaching
three window-widths below 1 with a linear sweep and the endpoints.
"""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpfr

from . import mpnum
from .builder import LPApproximant
from .mpnum import mpf
from .oracle import ref_power
from .scheme import Axis

__all__ = ["ErrorGrid", "ErrorReport", "error_grid", "eval_lp", "sup_error", "clenshaw"]


@dataclass(frozen=True)
class ErrorGrid:
    """Sorted evaluation points plus the recipe that produced them."""

    points: tuple[mpfr, ...]
    n_log: int
    n_lin: int
    log_floor: mpfr


@dataclass(frozen=True)
class ErrorReport:
    max_err: mpfr
    argmax_x: mpfr


def error_grid(p, n_log: int = 1000, n_lin: int = 200) -> ErrorGrid:
    """Singularity-aware grid on [0, 1], mirrored to [-1, 1] for imaginary-axis runs.

    Log-spaced points cover [e**(-3T/alpha), 1], which brackets the error peak
    near x* = e**((gamma-T)/alpha) since gamma > 1; linear points cover (0, 1];
    endpoints are always present.
    """
    if n_log < 1 or n_lin < 1:
        raise ValueError("n_log and n_lin must be >= 1")
    ln_floor = -3 * p.t_cap / p.alpha
    log_floor = mpfr(mpnum.exp(ln_floor))
    pts = {mpfr(0), mpfr(1), log_floor}
    for i in range(1, n_log - 1):
        pts.add(mpfr(mpnum.exp(ln_floor * (n_log - 1 - i) / (n_log - 1))))
    for k in range(1, n_lin + 1):
        pts.add(mpfr(k) / n_lin)
    if p.axis is Axis.IMAG:
        pts |= {-x for x in pts}
    return ErrorGrid(points=tuple(sorted(pts)), n_log=n_log, n_lin=n_lin,
                     log_floor=log_floor)


def clenshaw(coeffs, t: mpfr) -> mpfr:
    """Clenshaw evaluation of sum c_k T_k(t)."""
    b1 = mpfr(0)
    b2 = mpfr(0)
    two_t = 2 * t
    for c in reversed(coeffs[1:]):
        b1, b2 = two_t * b1 - b2 + c, b1
    return coeffs[0] + t * b1 - b2


def eval_lp(a: LPApproximant, x) -> mpfr:
    """Evaluate the approximant at x.

    RealAxis: sum a_j/(x - p_j) + P(x) on [0, 1].  ImagAxis: the even form
    sum a_j/(x**2 - p_j) + P(x**2) on [-1, 1], which is the exact
    partial-fraction merge of the conjugate pole pairs +/- i*b_j.
    A c_shift != 1 configuration evaluates the C = 1 build at x/C and scales
    by C**alpha.
    """
    p = a.params
    x = mpf(x)
    if p.axis is Axis.REAL:
        if x < 0 or x > 1:
            raise ValueError(f"x must lie in [0, 1], got {x}")
        y = x
    else:
        if x < -1 or x > 1:
            raise ValueError(f"x must lie in [-1, 1], got {x}")
        y = x * x
    c = p.c_shift
    scaled = c != 1
    if scaled:
        y = y / c
    total = mpfr(0)
    if scaled:
        for aj, pj in zip(a.pole_part.residues, a.pole_part.poles.values):
            total += aj / (y - pj / c)
    else:
        for aj, pj in zip(a.pole_part.residues, a.pole_part.poles.values):
            total += aj / (y - pj)
    total += clenshaw(a.tail.coeffs, 2 * y - 1)
    if scaled:
        total *= c ** p.alpha
    return total


def sup_error(a: LPApproximant, grid: ErrorGrid) -> ErrorReport:
    """Max grid error against x**alpha (RealAxis) or |x|**(2*alpha) (ImagAxis).

    Deterministic argmax tie-break: the smallest x wins.
    """
    p = a.params
    alpha = p.alpha
    best = mpfr(-1)
    arg = mpfr(0)
    for x in grid.points:
        if p.axis is Axis.REAL:
            ref = ref_power(x, alpha)
        else:
            ref = ref_power(x * x, alpha)
        err = abs(eval_lp(a, x) - ref)
        if err > best:
            best = err
            arg = x
    return ErrorReport(max_err=best, argmax_x=arg)
