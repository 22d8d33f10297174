"""Lightning-plus-polynomial rational approximation of x**alpha.

Clustered-pole (tapered and uniform, real- and imaginary-axis) approximants
built from the explicit composite-rectangular-rule construction, an
extended-precision evaluation and measurement stack, and closed-form
root-exponential rate predictors with the experiments that verify them.
"""

from .builder import LPApproximant, build_lp, n2_rule, N2Rule
from .evaluator import error_grid, eval_lp, sup_error
from .experiments import fit_exponent, run_convergence, run_quaderr
from .mpnum import PrecisionPolicy, required_precision, workprec
from .poles import tapered_poles, to_imaginary, uniform_poles
from .scheme import Axis, Kind, SchemeParams, make_params
from .theory import best_sigma, predicted_exponent, stahl_limit

__version__ = "0.1.0"

__all__ = [
    "Axis",
    "Kind",
    "LPApproximant",
    "N2Rule",
    "PrecisionPolicy",
    "SchemeParams",
    "best_sigma",
    "build_lp",
    "error_grid",
    "eval_lp",
    "fit_exponent",
    "make_params",
    "n2_rule",
    "predicted_exponent",
    "required_precision",
    "run_convergence",
    "run_quaderr",
    "stahl_limit",
    "sup_error",
    "tapered_poles",
    "to_imaginary",
    "uniform_poles",
    "workprec",
]
