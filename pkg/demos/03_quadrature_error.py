"""Exponential decay of the rectangular-rule error behind the schemes.

The pole expansions are exactly the composite rectangular sums S (tapered)
and Sbar (uniform) of the truncated integral representation of x**alpha.
This sweep measures sup |I - S| over x and fits its exponent against
sqrt(N1); the prediction is min(sigma*alpha, 4*pi**2/sigma) for the tapered
rule and min(sigma*alpha, 2*pi**2/sigma) for the uniform one.
"""

from fractions import Fraction

import gmpy2

from lppoly import Kind, fit_exponent, run_quaderr, workprec
from lppoly.experiments import default_fit_floor
from lppoly.mpnum import mpf, pi

ALPHA = Fraction(1, 2)
N1S = [25, 49, 81, 121]

with workprec(150):
    a = mpf(ALPHA)
    cases = [
        (Kind.TAPERED, 2 * pi() / gmpy2.sqrt(a), "tapered, best sigma"),
        (Kind.TAPERED, 4 * pi() / gmpy2.sqrt(a), "tapered, 2x best"),
        (Kind.UNIFORM, gmpy2.sqrt(mpf(2)) * pi() / gmpy2.sqrt(a), "uniform, best sigma"),
    ]
    for kind, sigma, label in cases:
        coef = 4 if kind is Kind.TAPERED else 2
        target = min(sigma * a, coef * pi() ** 2 / sigma)
        records = run_quaderr(kind, ALPHA, sigma, N1S, n_log=80, n_lin=16)
        fit = fit_exponent([(r.n1, r.sup_quad_err) for r in records],
                           default_fit_floor())
        print(f"{label}: sigma = {float(sigma):.3f}")
        for r in records:
            print(f"  N1 = {r.n1:4d}   sup|I - S| = {float(r.sup_quad_err):.3e}")
        print(f"  fitted exponent {float(fit.rho_hat):.4f}  "
              f"(predicted {float(target):.4f})\n")
