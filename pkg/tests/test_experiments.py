from fractions import Fraction

import gmpy2
import pytest
from gmpy2 import mpfr

from helpers import assert_close
from lppoly import mpnum
from lppoly.experiments import (InsufficientDataError, default_fit_floor,
                                fit_exponent, normalize_by_stahl, run_convergence,
                                run_quaderr)
from lppoly.mpnum import mpf
from lppoly.scheme import Axis, Kind
from lppoly.theory import best_sigma, stahl_limit


def test_fit_exponent_exact_law():
    pts = [(n, gmpy2.exp(-3 * gmpy2.sqrt(mpfr(n)))) for n in (16, 25, 36, 49, 64, 81, 100)]
    fit = fit_exponent(pts, mpfr(0))
    assert abs(fit.rho_hat - 3) <= mpf("1e-12") * 3
    assert fit.points_used == 7
    assert fit.residual_rms <= mpf("1e-30")


def test_fit_exponent_prefactor_invariance():
    pts5 = [(n, 5 * gmpy2.exp(-3 * gmpy2.sqrt(mpfr(n)))) for n in (16, 36, 64, 100)]
    fit = fit_exponent(pts5, mpfr(0))
    assert abs(fit.rho_hat - 3) <= mpf("1e-12") * 3
    assert_close(fit.intercept, mpnum.log(mpf(5)), 1 << 20, label="intercept ln 5")


def test_fit_exponent_insufficient_data():
    pts = [(16, mpf("1e-5")), (36, mpf("1e-40")), (64, mpf("1e-41"))]
    with pytest.raises(InsufficientDataError):
        fit_exponent(pts, mpf("1e-30"))


def test_fit_floor_removes_only_trailing_points():
    floor = default_fit_floor()
    errs = [mpf("1e-3"), mpf("1e-9"), mpf("1e-20"), floor / 2, floor / 4]
    pts = list(zip((16, 36, 64, 100, 144), errs))
    fit = fit_exponent(pts, floor)
    assert fit.points_used == 3
    kept = [n for n, e in pts if e > floor]
    assert kept == [16, 36, 64]  # a strict prefix: the filter only trims the tail


def test_run_convergence_records():
    records = run_convergence(Kind.TAPERED, Axis.REAL, Fraction(1, 2), [9, 16, 25],
                              sigma="best", n2_mode="fig", n_log=80, n_lin=16)
    assert [r.n1 for r in records] == [9, 16, 25]
    for r in records:
        assert r.n == r.n1 + r.n2
        assert r.sup_err > 0
        assert r.normalized > 0
        assert r.kind is Kind.TAPERED and r.axis is Axis.REAL
    assert records[0].sup_err > records[-1].sup_err


def test_run_convergence_single_point():
    records = run_convergence(Kind.UNIFORM, Axis.REAL, Fraction(1, 2), [9],
                              sigma="best", n2_mode=4, n_log=40, n_lin=8)
    assert len(records) == 1
    assert records[0].n2 == 4


def test_run_convergence_reproducible():
    def run():
        recs = run_convergence(Kind.TAPERED, Axis.REAL, Fraction(1, 5), [9, 16],
                               sigma="best", n2_mode="fig", n_log=40, n_lin=8)
        return [(mpnum.to_decimal(r.sup_err, 40), mpnum.to_decimal(r.argmax_x, 40))
                for r in recs]

    assert run() == run()


def test_run_convergence_validation_and_tagging():
    with pytest.raises(ValueError):
        run_convergence(Kind.TAPERED, Axis.REAL, Fraction(1, 2), [])
    with pytest.raises(ValueError):
        run_convergence(Kind.TAPERED, Axis.REAL, Fraction(1, 2), [16, 9])
    with pytest.raises(RuntimeError, match="n1=9"):
        run_convergence(Kind.TAPERED, Axis.REAL, Fraction(1, 2), [9], sigma="best",
                        n2_mode=-1)


def test_normalize_by_stahl_unit_law():
    base = run_convergence(Kind.TAPERED, Axis.REAL, Fraction(1, 2), [9],
                           sigma="best", n2_mode="fig", n_log=40, n_lin=8)
    rho = base[0].predicted_rho
    g = stahl_limit(base[0].alpha)
    from dataclasses import replace
    synthetic = [replace(base[0], sup_err=mpfr(g * gmpy2.exp(-rho * gmpy2.sqrt(mpfr(base[0].n)))))]
    out = normalize_by_stahl(synthetic)
    assert_close(out[0].normalized, mpfr(1), 1 << 12, label="normalized = 1")


def test_fitted_rho_peaks_at_best_sigma():
    # three-clustering comparison at alpha = 1/5, where the figure-rule tail
    # still resolves every law cleanly
    a = Fraction(1, 5)
    am = mpf(a)
    fits = {}
    for name, sig in (("under", gmpy2.const_pi() / gmpy2.sqrt(am)),
                      ("best", best_sigma(Kind.TAPERED, a)),
                      ("over", 3 * gmpy2.const_pi() / gmpy2.sqrt(am))):
        recs = run_convergence(Kind.TAPERED, Axis.REAL, a, [16, 36, 64, 100],
                               sigma=sig, n2_mode="fig", n_log=300, n_lin=60)
        fits[name] = fit_exponent([(r.n, r.sup_err) for r in recs], default_fit_floor())
    assert fits["best"].rho_hat > fits["under"].rho_hat
    assert fits["best"].rho_hat > fits["over"].rho_hat


def test_run_quaderr_records():
    records = run_quaderr(Kind.UNIFORM, Fraction(1, 2), "best", [6, 10, 14],
                          n_log=30, n_lin=6)
    assert [r.n1 for r in records] == [6, 10, 14]
    for r in records:
        assert r.sup_quad_err > 0
    with pytest.raises(ValueError):
        run_quaderr(Kind.UNIFORM, Fraction(1, 2), "best", [])
