from fractions import Fraction

import gmpy2
import pytest
from gmpy2 import mpfr

from helpers import assert_close
from lppoly import mpnum
from lppoly.mpnum import mpf, pi, workprec
from lppoly.scheme import Kind
from lppoly.theory import (Regime, best_sigma, g_of_u, integrand_pole, m_zero,
                           predicted_exponent, q_bounds, stahl_limit, trunc_bounds,
                           u_star, x_star)


def test_predicted_exponent_boundary_at_best_sigma():
    a = mpf("0.5")
    model = predicted_exponent(Kind.TAPERED, a, best_sigma(Kind.TAPERED, a))
    assert model.regime is Regime.BOUNDARY
    assert_close(model.exponent_rho, 2 * pi() * gmpy2.sqrt(a), 8, label="rho at best sigma")


def test_predicted_exponent_quadrature_branch():
    a = mpf("0.5")
    s = 3 * pi() / gmpy2.sqrt(a)
    model = predicted_exponent(Kind.TAPERED, a, s)
    assert model.regime is Regime.QUADRATURE_LIMITED
    assert_close(model.exponent_rho, 4 * pi() ** 2 / s, 8, label="4*pi^2/sigma")


def test_predicted_exponent_saturated_branch():
    a = mpf("0.5")
    s = pi() / gmpy2.sqrt(a)
    model = predicted_exponent(Kind.TAPERED, a, s)
    assert model.regime is Regime.SATURATED
    assert_close(model.exponent_rho, s * a, 8)


def test_predicted_exponent_uniform_best():
    for af in (Fraction(1, 5), Fraction(1, 2), Fraction(4, 5)):
        a = mpf(af)
        model = predicted_exponent(Kind.UNIFORM, a, best_sigma(Kind.UNIFORM, a))
        assert model.regime is Regime.BOUNDARY
        assert_close(model.exponent_rho, pi() * gmpy2.sqrt(2 * a), 8,
                     label="pi*sqrt(2*alpha)")


def test_predicted_exponent_piecewise_monotone():
    for kind in (Kind.TAPERED, Kind.UNIFORM):
        for af in (Fraction(1, 5), Fraction(1, 2), Fraction(4, 5)):
            a = mpf(af)
            sb = best_sigma(kind, a)
            rhos = []
            sigmas = [sb * mpfr(2) ** (mpfr(k - 50) / 10) for k in range(100)]
            for s in sigmas:
                rhos.append(predicted_exponent(kind, a, s).exponent_rho)
            peak = max(range(100), key=lambda i: rhos[i])
            for i in range(1, 100):
                if sigmas[i] <= sb:
                    assert rhos[i] >= rhos[i - 1]
                if sigmas[i - 1] >= sb:
                    assert rhos[i] <= rhos[i - 1]
            rho_best = predicted_exponent(kind, a, sb).exponent_rho
            assert rho_best >= rhos[peak] * (1 - mpfr(2) ** -100)


def test_best_sigma_values():
    assert_close(best_sigma(Kind.TAPERED, mpf("0.25")), 4 * pi(), 4, label="2*pi/sqrt(1/4)")
    assert_close(best_sigma(Kind.UNIFORM, mpf("0.5")), 2 * pi(), 4, label="sqrt(2)*pi/sqrt(1/2)")


def test_stahl_limit():
    assert stahl_limit(mpf("0.5")) == 8
    assert stahl_limit(mpf("0.01")) < stahl_limit(mpf("0.5"))
    for af in (Fraction(1, 5), Fraction(1, 2), Fraction(4, 5)):
        a = mpf(af)
        assert_close(stahl_limit(a) / gmpy2.sin(a * pi()), mpfr(4) ** (1 + a), 8)


def test_u_star_golden_values():
    assert u_star(mpf("0.5")) == 2
    with pytest.raises(ValueError):
        u_star(mpf(0))
    with pytest.raises(ValueError):
        u_star(mpf(1))
    grid = [mpf(Fraction(k, 100)) for k in (2, 11, 20, 29, 38, 50, 62, 71, 80, 89, 98)]
    vals = [u_star(a) for a in grid]
    assert all(1 < v < 4 for v in vals)
    assert all(x < y for x, y in zip(vals, vals[1:]))
    assert vals[0] < mpf("1.05")
    assert vals[-1] > mpf("3.6")


def test_u_star_stationarity_residual():
    with workprec(256):
        for af in (Fraction(1, 5), Fraction(1, 2), Fraction(4, 5)):
            a = mpf(af)
            kappa = a / (1 - a)
            u = u_star(a)
            su = gmpy2.sqrt(u)
            resid = u + (kappa - 1) * su - (a * kappa + a + kappa)
            scale = a * kappa + a + kappa
            assert abs(resid / scale) <= mpfr(10) ** -30


def test_g_minimized_at_u_star():
    a = mpf("0.5")
    t = mpf(20)
    us = u_star(a)
    g0 = g_of_u(us, a, t)
    for d in ("0.01", "0.1", "0.3"):
        assert g_of_u(us - mpf(d), a, t) > g0
        assert g_of_u(us + mpf(d), a, t) > g0
    # derivative sign change across u* on a finite-difference stencil
    h = mpf("0.001")
    dm = g_of_u(us - mpf("0.1") + h, a, t) - g_of_u(us - mpf("0.1") - h, a, t)
    dp = g_of_u(us + mpf("0.1") + h, a, t) - g_of_u(us + mpf("0.1") - h, a, t)
    assert dm < 0 < dp


def test_g_closed_form_at_half():
    a = mpf("0.5")
    t = mpf(20)
    s2 = gmpy2.sqrt(mpfr(2))
    ref = (s2 + 1) / (s2 - 1) * gmpy2.exp(2 * s2 - 2 * t)
    assert_close(g_of_u(mpfr(2), a, t), ref, 16, label="g(2) for alpha=1/2")
    with pytest.raises(ValueError):
        g_of_u(mpfr(1), a, t)


def test_x_star_info():
    a = mpf("0.5")
    t = mpf(20)
    info = x_star(a, t)
    assert info.u_star == 2
    assert info.gamma > 1
    assert_close(info.x_star, g_of_u(info.u_star, a, t), 16, label="x* = g(u*)")
    far = x_star(a, mpf(40))
    assert far.x_star < info.x_star
    for k in range(1, 10):
        assert x_star(mpf(Fraction(k, 10)), t).gamma > 1


def test_m_zero_golden_values():
    assert m_zero(2 * pi()) == 36
    assert m_zero(pi()) == 64
    assert m_zero(mpf(10)) == 50
    with pytest.raises(ValueError):
        m_zero(mpf(0))
    for s in (mpf("0.5"), mpf(2), pi(), mpf(7), mpf(10), mpf(25)):
        assert m_zero(s) >= s * s / 2


def test_q_bounds_eta_one_exact_at_best_sigma():
    for af in (Fraction(1, 5), Fraction(1, 2), Fraction(4, 5)):
        a = mpf(af)
        qb = q_bounds(a, best_sigma(Kind.TAPERED, a), mpf(25))
        assert qb.eta == 1
        assert qb.x_min is None


def test_q_bounds_endpoint_value():
    a = mpf("0.5")
    t = mpf(25)
    qb = q_bounds(a, best_sigma(Kind.TAPERED, a), t)
    assert_close(qb.lower, 1 / gmpy2.expm1(qb.eta * t), 8, label="Q(1)")
    assert qb.lower <= qb.upper


def _q_kernel(x, a, eta, t):
    return x ** a / (x ** (eta * a) * gmpy2.exp(eta * t) - 1)


def test_q_bounds_brute_force_containment():
    a = mpf("0.5")
    t = mpf(20)
    slack = 1 + mpfr(2) ** -160
    for s in (pi() / gmpy2.sqrt(a), best_sigma(Kind.TAPERED, a), 4 * pi() / gmpy2.sqrt(a)):
        qb = q_bounds(a, s, t)
        xs = x_star(a, t).x_star
        ln_lo = mpnum.log(xs)
        for i in range(2000):
            x = mpnum.exp(ln_lo * (1999 - i) / 1999)
            q = _q_kernel(mpfr(x), a, qb.eta, t)
            assert q >= qb.lower / slack
            assert q <= qb.upper * slack


def test_q_bounds_interior_minimum_when_eta_below_one():
    a = mpf("0.5")
    t = mpf(20)
    s = 4 * pi() / gmpy2.sqrt(a)   # eta = 1/4
    qb = q_bounds(a, s, t)
    assert_close(qb.eta, mpf("0.25"), 8, label="eta")
    assert qb.x_min is not None
    q0 = _q_kernel(qb.x_min, a, qb.eta, t)
    assert_close(q0, qb.lower, 64, label="Q(x_min) equals the lower bound")
    for fac in ("0.9", "1.1"):
        assert _q_kernel(qb.x_min * mpf(fac), a, qb.eta, t) > q0


def _abs_f(v, w, x, a, t):
    """|f(u, x)| at complex u = v + i*w via real square-root formulas."""
    r = gmpy2.sqrt(v * v + w * w)
    re_su = gmpy2.sqrt((r + v) / 2)
    im_su = gmpy2.sqrt((r - v) / 2)
    if w < 0:
        im_su = -im_su
    pref = gmpy2.sin(a * pi()) / (a * pi())
    big_r = mpnum.exp((re_su - t) / a)
    theta = im_su / a
    den2 = (big_r * gmpy2.cos(theta) + x) ** 2 + (big_r * gmpy2.sin(theta)) ** 2
    return pref * x * mpnum.exp(re_su - t) / (2 * gmpy2.sqrt(r) * gmpy2.sqrt(den2))


def test_integrand_pole_conjugate_pair_and_v0():
    a = mpf("0.6")
    t = mpf(20)
    x = mpf("0.5")
    v0, w0 = integrand_pole(0, x, a, t)
    v1, w1 = integrand_pole(1, x, a, t)
    assert v0 == v1
    assert w0 == -w1
    ell = t + a * mpnum.log(x)
    assert_close(v0, ell * ell - (a * pi()) ** 2, 8, label="v0")
    assert_close(w0, -2 * a * pi() * ell, 8, label="w0 = -a")
    with pytest.raises(ValueError):
        integrand_pole(0, 0, a, t)


def test_integrand_blows_up_at_nearest_pole():
    a = mpf("0.6")
    t = mpf(20)
    x = mpf("0.5")
    v0, w0 = integrand_pole(0, x, a, t)
    vals = []
    for k in range(1, 5):
        d = mpf(10) ** -k
        vals.append(_abs_f(v0 + d / gmpy2.sqrt(mpfr(2)), w0 + d / gmpy2.sqrt(mpfr(2)),
                           x, a, t))
    assert all(u < v for u, v in zip(vals, vals[1:]))


def test_trunc_bounds():
    tb0 = trunc_bounds(mpf(0))
    assert tb0.e1 == 2 and tb0.e_full == 3
    t = mpf(5)
    a_, b_ = trunc_bounds(t), trunc_bounds(t + mpnum.log(mpf(2)))
    assert_close(a_.e1, 2 * b_.e1, 8, label="halving under T + log 2")
    assert_close(a_.e_full, 2 * b_.e_full, 8)
