"""Root-exponential convergence of the tapered scheme, measured and predicted.

Sweeps N1 for three clustering strengths at alpha = 1/2 and fits the
observed exponent rho in error ~ e**(-rho*sqrt(N)).  The predicted law is
rho = min(sigma*alpha, 4*pi**2/sigma), maximized at sigma = 2*pi/sqrt(alpha).

Two tail-degree rules are shown: the analytic degree ceil(T/log(2+sqrt(3)))+2
resolves every law; the compact figure rule ceil(1.3*sqrt(N1)) is cheaper but
its truncation error caps the observable rate once the law outruns the
Bernstein decay of the nearest far pole.
"""

from fractions import Fraction

import gmpy2

from lppoly import Kind, Axis, fit_exponent, predicted_exponent, run_convergence, workprec
from lppoly.experiments import default_fit_floor
from lppoly.mpnum import mpf, pi

ALPHA = Fraction(1, 2)
N1S = [16, 36, 64, 100]

with workprec(192):
    a = mpf(ALPHA)
    for label, sigma in (("pi/sqrt(a)  (under-clustered)", pi() / gmpy2.sqrt(a)),
                         ("2pi/sqrt(a) (rate-optimal)", 2 * pi() / gmpy2.sqrt(a)),
                         ("3pi/sqrt(a) (over-clustered)", 3 * pi() / gmpy2.sqrt(a))):
        rho = predicted_exponent(Kind.TAPERED, a, sigma).exponent_rho
        print(f"\nsigma = {label}, predicted rho = {float(rho):.4f}")
        for rule in ("bound", "fig"):
            records = run_convergence(Kind.TAPERED, Axis.REAL, ALPHA, N1S,
                                      sigma=sigma, n2_mode=rule,
                                      n_log=400, n_lin=80)
            fit = fit_exponent([(r.n, r.sup_err) for r in records],
                               default_fit_floor())
            errs = ", ".join(f"{float(r.sup_err):.1e}" for r in records)
            print(f"  n2 rule {rule:>5}: fitted rho = {float(fit.rho_hat):.4f}   "
                  f"sup errors [{errs}]")
