"""The closed-form analysis constants for a few configurations.

For each alpha: the rate-optimal clustering strengths, the minimax limit
constant, the integrand-monotonicity threshold (u*, gamma, x*), and the
pole-distance kernel bounds that drive the quadrature-limited branch.
"""

from fractions import Fraction

import gmpy2

from lppoly import Kind, best_sigma, predicted_exponent, stahl_limit, workprec
from lppoly.mpnum import mpf, to_decimal
from lppoly.theory import m_zero, q_bounds, trunc_bounds, u_star, x_star

with workprec(192):
    for af in (Fraction(1, 5), Fraction(1, 2), Fraction(4, 5)):
        a = mpf(af)
        st = best_sigma(Kind.TAPERED, af)
        su = best_sigma(Kind.UNIFORM, af)
        rt = predicted_exponent(Kind.TAPERED, a, st)
        ru = predicted_exponent(Kind.UNIFORM, a, su)
        print(f"alpha = {af}")
        print(f"  best sigma: tapered {to_decimal(st, 10)}  "
              f"uniform {to_decimal(su, 10)}")
        print(f"  best rates: tapered {to_decimal(rt.exponent_rho, 10)} "
              f"({rt.regime.value})  uniform {to_decimal(ru.exponent_rho, 10)}")
        print(f"  minimax limit constant 4^(1+a) sin(a pi) = "
              f"{to_decimal(stahl_limit(a), 10)}")
        print(f"  u* = {to_decimal(u_star(a), 10)}   M0(best sigma) = {m_zero(st)}")
        t = st * a * gmpy2.sqrt(mpf(36))     # window cap for N1 = 36
        info = x_star(a, t)
        tb = trunc_bounds(t)
        qb = q_bounds(a, st, t)
        print(f"  at N1 = 36: T = {to_decimal(t, 8)}, gamma = {to_decimal(info.gamma, 8)}")
        print(f"    x* = {to_decimal(info.x_star, 8)} "
              f"(sum is a lower Riemann sum left of this)")
        print(f"    window truncations 2e^-T = {to_decimal(tb.e1, 6)}, "
              f"3e^-T = {to_decimal(tb.e_full, 6)}")
        print(f"    kernel bounds: eta = {to_decimal(qb.eta, 6)}, "
              f"Q in [{to_decimal(qb.lower, 6)}, {to_decimal(qb.upper, 6)}]")
        print()
