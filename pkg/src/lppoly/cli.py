"""Command-line entry point, serialization and CSV emission.

Subcommands: ``build`` (construct and save an approximant), ``eval``
(evaluate a saved approximant), ``converge`` / ``quaderr`` (experiment
sweeps emitting CSV), ``theory`` (print the closed-form constants).
Exit codes: 0 success, 2 usage, 3 I/O or file-format failure, 4 numerical
(reference quadrature failure).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction

import gmpy2
from gmpy2 import mpfr

from . import mpnum
from .builder import LPApproximant, BuildDiagnostics, ChebTail, N2Rule, PoleResidueForm, \
    bernstein_rho, build_lp, n2_rule
from .evaluator import eval_lp
from .experiments import ConvergenceRecord, QuadErrRecord, fit_exponent, \
    default_fit_floor, run_convergence, run_quaderr
from .mpnum import PrecisionPolicy, from_decimal, mpf, required_precision, to_decimal
from .oracle import OracleError
from .poles import PoleSet
from .scheme import ALPHA_MAX, ALPHA_MIN, Axis, Kind, make_params
from .theory import best_sigma, m_zero, predicted_exponent, q_bounds, stahl_limit, \
    trunc_bounds, u_star, x_star

__all__ = ["main", "parse_args", "emit_csv", "save_approximant", "load_approximant",
           "ApproximantFormatError"]

CSV_DIGITS = 30
FILE_FORMAT = "lp-approximant"
FILE_VERSION = 1

EXIT_USAGE = 2
EXIT_IO = 3
EXIT_NUMERICAL = 4


class ApproximantFormatError(ValueError):
    """A saved approximant file failed schema or invariant validation."""


class _UsageError(ValueError):
    pass


def _parse_alpha(text: str) -> Fraction:
    try:
        a = Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise _UsageError(f"invalid --alpha {text!r}: {e}") from None
    if not (ALPHA_MIN <= a <= ALPHA_MAX):
        raise _UsageError(f"--alpha must lie in [{ALPHA_MIN}, {ALPHA_MAX}], got {text}")
    return a


def _parse_n1_grid(text: str) -> list[int]:
    parts = text.split(":")
    try:
        if len(parts) == 1:
            vals = [int(parts[0])]
        elif len(parts) == 3:
            a, b, c = (int(v) for v in parts)
            if b <= 0:
                raise ValueError("stride must be positive")
            vals = list(range(a, c + 1, b))
        else:
            raise ValueError("expected START:STRIDE:STOP or a single integer")
    except ValueError as e:
        raise _UsageError(f"invalid n1 grid {text!r}: {e}") from None
    if not vals or vals[0] < 1:
        raise _UsageError(f"n1 grid {text!r} is empty or starts below 1")
    return vals


def _parse_n2_mode(text: str):
    if text in ("fig", "bound"):
        return text
    try:
        v = int(text)
    except ValueError:
        raise _UsageError(f"--n2 must be 'fig', 'bound' or an integer, got {text!r}") from None
    if v < 0:
        raise _UsageError(f"--n2 must be >= 0, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lppoly",
        description="Clustered-pole rational approximation of x**alpha and its "
                    "root-exponential convergence experiments.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(sp, axis=True):
        sp.add_argument("--scheme", choices=["tapered", "uniform"], default="tapered")
        if axis:
            sp.add_argument("--axis", choices=["real", "imag"], default="real")
        sp.add_argument("--alpha", required=True)
        sp.add_argument("--sigma", default=None,
                        help="clustering strength; omit with --sigma-mode best")
        sp.add_argument("--sigma-mode", choices=["best", "explicit"], default="explicit")
        sp.add_argument("--c", dest="c_shift", default="1",
                        help="pole interval endpoint C (default 1)")
        sp.add_argument("--precision", default="auto",
                        help="working precision in bits, or 'auto'")

    p_build = sub.add_parser("build", help="build one approximant and save it")
    common(p_build)
    p_build.add_argument("--n1", type=int, required=True)
    p_build.add_argument("--n2", default="fig")
    p_build.add_argument("--out", required=True)

    p_eval = sub.add_parser("eval", help="evaluate a saved approximant")
    p_eval.add_argument("--in", dest="path", required=True)
    p_eval.add_argument("--x", action="append", required=True,
                        help="evaluation point (repeatable)")
    p_eval.add_argument("--digits", type=int, default=CSV_DIGITS)

    p_conv = sub.add_parser("converge", help="sup-error convergence sweep, CSV out")
    common(p_conv)
    p_conv.add_argument("--n1-grid", required=True, help="START:STRIDE:STOP")
    p_conv.add_argument("--n2", default="fig")
    p_conv.add_argument("--n-log", type=int, default=1000)
    p_conv.add_argument("--n-lin", type=int, default=200)
    p_conv.add_argument("--out", required=True)

    p_q = sub.add_parser("quaderr", help="rectangular-rule error sweep, CSV out")
    common(p_q, axis=False)
    p_q.add_argument("--n1-grid", required=True)
    p_q.add_argument("--out", required=True)

    p_th = sub.add_parser("theory", help="print closed-form constants as key=value")
    p_th.add_argument("--alpha", required=True)
    p_th.add_argument("--sigma", default=None)
    p_th.add_argument("--n1", type=int, default=None,
                      help="adds the T-dependent quantities (x*, Q bounds, truncation)")
    p_th.add_argument("--precision", default="256")

    return parser


def parse_args(argv):
    """Validate argv into a plain namespace; raises _UsageError on bad values."""
    args = build_parser().parse_args(argv)
    if hasattr(args, "alpha"):
        args.alpha_frac = _parse_alpha(args.alpha)
    if getattr(args, "sigma_mode", None) == "explicit" and getattr(args, "sigma", None) is None:
        if args.subcommand != "theory":
            raise _UsageError("--sigma is required unless --sigma-mode best")
    if hasattr(args, "n1_grid"):
        args.n1_list = _parse_n1_grid(args.n1_grid)
    if hasattr(args, "n2") and isinstance(args.n2, str):
        args.n2_mode = _parse_n2_mode(args.n2)
    return args


def _resolve_sigma(args, kind: Kind):
    if getattr(args, "sigma_mode", "explicit") == "best":
        return best_sigma(kind, args.alpha_frac)
    return mpf(args.sigma)


def _auto_bits(kind: Kind, alpha, sigma, n_max: int) -> int:
    rho = predicted_exponent(kind, alpha, sigma).exponent_rho
    return required_precision(PrecisionPolicy(float(rho), n_max))


def _resolve_precision(args, kind, alpha, sigma, n_max) -> int:
    if args.precision == "auto":
        with mpnum.workprec(96):
            return _auto_bits(kind, alpha, mpf(sigma), n_max)
    try:
        bits = int(args.precision)
    except ValueError:
        raise _UsageError(f"--precision must be an integer or 'auto', got {args.precision!r}") from None
    if bits < 2:
        raise _UsageError(f"--precision must be >= 2, got {bits}")
    return bits


def emit_csv(records, path) -> None:
    """Write experiment records as UTF-8 CSV, 30-significant-digit decimals.

    Rows are sorted by (alpha, sigma, n1); identical record lists produce
    byte-identical files.
    """
    conv_header = ["scheme", "axis", "alpha", "sigma", "n1", "n2", "n",
                   "sup_err", "argmax_x", "predicted_rho", "normalized"]
    quad_header = ["scheme", "alpha", "sigma", "n1", "sup_quad_err"]
    records = sorted(records, key=lambda r: (r.alpha, r.sigma, r.n1))
    if records and not (all(isinstance(r, ConvergenceRecord) for r in records)
                        or all(isinstance(r, QuadErrRecord) for r in records)):
        raise TypeError("records must be all ConvergenceRecord or all QuadErrRecord")
    is_quad = bool(records) and isinstance(records[0], QuadErrRecord)

    def dec(v):
        return to_decimal(v, CSV_DIGITS)

    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        if is_quad:
            w.writerow(quad_header)
            for r in records:
                w.writerow([r.kind.value, dec(r.alpha), dec(r.sigma), r.n1,
                            dec(r.sup_quad_err)])
        else:
            w.writerow(conv_header)
            for r in records:
                w.writerow([r.kind.value, r.axis.value, dec(r.alpha), dec(r.sigma),
                            r.n1, r.n2, r.n, dec(r.sup_err), dec(r.argmax_x),
                            dec(r.predicted_rho), dec(r.normalized)])


def save_approximant(a: LPApproximant, path) -> None:
    """Write a self-describing JSON document; decimals carry enough digits to
    reconstruct every value to <= 1 ulp at the build precision."""
    p = a.params
    bits = a.diagnostics.build_precision_bits
    digits = mpnum.decimal_digits_for(bits)

    def dec(v):
        return to_decimal(v, digits)

    doc = {
        "format": FILE_FORMAT,
        "version": FILE_VERSION,
        "precision_bits": bits,
        "params": {
            "kind": p.kind.value,
            "axis": p.axis.value,
            "alpha": f"{p.alpha_frac.numerator}/{p.alpha_frac.denominator}",
            "sigma": dec(p.sigma),
            "c_shift": dec(p.c_shift),
            "n1": p.n1,
            "n2": p.n2,
        },
        "pole_magnitudes": [dec(abs(v)) for v in a.pole_part.poles.values],
        "residues": [dec(v) for v in a.pole_part.residues],
        "tail": {
            "degree": a.tail.degree,
            "coeffs": [dec(v) for v in a.tail.coeffs],
            "v_max": dec(a.tail.v_max),
            "trunc_bound": dec(a.tail.trunc_bound),
        },
        "diagnostics": {
            "trunc_T_bound": dec(a.diagnostics.trunc_T_bound),
            "tail_bound": dec(a.diagnostics.tail_bound),
            "build_precision_bits": bits,
        },
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load_approximant(path) -> LPApproximant:
    """Reconstruct an approximant; validates schema, counts and sign invariants."""
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as e:
            raise ApproximantFormatError(f"not a JSON document: {e}") from None
    if doc.get("format") != FILE_FORMAT:
        raise ApproximantFormatError(f"unknown format {doc.get('format')!r}")
    if doc.get("version") != FILE_VERSION:
        raise ApproximantFormatError(f"unsupported version {doc.get('version')!r}")
    try:
        bits = int(doc["precision_bits"])
        pd = doc["params"]
        kind = Kind(pd["kind"])
        axis = Axis(pd["axis"])
        alpha = Fraction(pd["alpha"])
        with mpnum.workprec(bits):
            params = make_params(kind, axis, alpha, from_decimal(pd["sigma"], bits),
                                 from_decimal(pd["c_shift"], bits), int(pd["n1"]),
                                 int(pd["n2"]))
            mags = [from_decimal(s, bits) for s in doc["pole_magnitudes"]]
            residues = [from_decimal(s, bits) for s in doc["residues"]]
            td = doc["tail"]
            coeffs = [from_decimal(s, bits) for s in td["coeffs"]]
            tail = ChebTail(degree=int(td["degree"]), coeffs=tuple(coeffs),
                            v_max=from_decimal(td["v_max"], bits),
                            trunc_bound=from_decimal(td["trunc_bound"], bits))
            dd = doc["diagnostics"]
            diag = BuildDiagnostics(
                trunc_T_bound=from_decimal(dd["trunc_T_bound"], bits),
                tail_bound=from_decimal(dd["tail_bound"], bits),
                build_precision_bits=int(dd["build_precision_bits"]))
    except (KeyError, ValueError, TypeError) as e:
        if isinstance(e, ApproximantFormatError):
            raise
        raise ApproximantFormatError(f"malformed approximant document: {e}") from None

    if len(mags) != params.n1:
        raise ApproximantFormatError(
            f"expected {params.n1} pole magnitudes, found {len(mags)}")
    if len(residues) != params.n1:
        raise ApproximantFormatError(
            f"expected {params.n1} residues, found {len(residues)}")
    if len(coeffs) != params.n2 + 1:
        raise ApproximantFormatError(
            f"expected {params.n2 + 1} tail coefficients, found {len(coeffs)}")
    if any(m <= 0 for m in mags):
        raise ApproximantFormatError("pole magnitudes must be positive (poles negative)")
    if any(b <= a for a, b in zip(mags, mags[1:])):
        raise ApproximantFormatError("pole magnitudes must increase strictly")
    if any(r >= 0 for r in residues):
        raise ApproximantFormatError("residues must be strictly negative")
    with mpnum.workprec(bits):
        rho1 = bernstein_rho()
        recomputed = 2 * tail.v_max / ((rho1 - 1) * rho1 ** tail.degree)
        ulp = mpfr(2) ** (gmpy2.get_exp(recomputed) - bits)
        if abs(recomputed - tail.trunc_bound) > 4 * ulp:
            raise ApproximantFormatError("tail trunc_bound inconsistent with v_max")
        poleset = PoleSet(kind=kind, axis=Axis.REAL,
                          values=tuple(-m for m in mags), params=params)
    form = PoleResidueForm(poles=poleset, residues=tuple(residues))
    return LPApproximant(params=params, pole_part=form, tail=tail, diagnostics=diag)


def _print_theory(args) -> None:
    a = mpf(args.alpha_frac)
    dec = lambda v: to_decimal(v, CSV_DIGITS)
    rows = [("alpha", dec(a)), ("kappa", dec(a / (1 - a)))]
    for kind in (Kind.TAPERED, Kind.UNIFORM):
        rows.append((f"best_sigma_{kind.value}", dec(best_sigma(kind, a))))
    if args.sigma is not None:
        s = mpf(args.sigma)
        if not s > 0:
            raise _UsageError(f"--sigma must be positive, got {args.sigma}")
        for kind in (Kind.TAPERED, Kind.UNIFORM):
            model = predicted_exponent(kind, a, s)
            rows.append((f"rho_{kind.value}", dec(model.exponent_rho)))
            rows.append((f"regime_{kind.value}", model.regime.value))
        rows.append(("m_zero", str(m_zero(s))))
    rows.append(("stahl_limit", dec(stahl_limit(a))))
    rows.append(("u_star", dec(u_star(a))))
    if args.n1 is not None and args.sigma is not None:
        s = mpf(args.sigma)
        t = s * a * gmpy2.sqrt(mpfr(args.n1))
        info = x_star(a, t)
        tb = trunc_bounds(t)
        qb = q_bounds(a, s, t)
        rows += [("t_cap", dec(t)), ("gamma", dec(info.gamma)),
                 ("x_star", dec(info.x_star)), ("eta", dec(qb.eta)),
                 ("q_lower", dec(qb.lower)), ("q_upper", dec(qb.upper)),
                 ("trunc_e1", dec(tb.e1)), ("trunc_e_full", dec(tb.e_full))]
        if qb.x_min is not None:
            rows.append(("q_x_min", dec(qb.x_min)))
    for key, val in rows:
        print(f"{key}={val}")


def _run(args) -> int:
    if args.subcommand == "theory":
        with mpnum.workprec(int(args.precision)):
            _print_theory(args)
        return 0

    if args.subcommand == "eval":
        approx = load_approximant(args.path)
        bits = approx.diagnostics.build_precision_bits
        with mpnum.workprec(bits):
            for token in args.x:
                try:
                    x = from_decimal(token, bits)
                except ValueError as e:
                    raise _UsageError(f"invalid --x {token!r}: {e}") from None
                print(f"{token} {to_decimal(eval_lp(approx, x), args.digits)}")
        return 0

    kind = Kind(args.scheme)
    with mpnum.workprec(96):
        sigma_96 = _resolve_sigma(args, kind)

    if args.subcommand == "build":
        # the FIG rule underestimates n2 under the "bound" mode, which only
        # makes the auto precision marginally conservative via the guard bits
        n2_est = (args.n2_mode if isinstance(args.n2_mode, int)
                  else n2_rule(args.n1, None, N2Rule.FIG))
        bits = _resolve_precision(args, kind, args.alpha_frac, sigma_96,
                                  args.n1 + n2_est)
        with mpnum.workprec(bits):
            sigma = _resolve_sigma(args, kind)
            probe = make_params(kind, Axis(args.axis), args.alpha_frac, sigma,
                                mpf(args.c_shift), args.n1, 0)
            n2 = (args.n2_mode if isinstance(args.n2_mode, int)
                  else n2_rule(args.n1, probe.step,
                               N2Rule.FIG if args.n2_mode == "fig" else N2Rule.BOUND,
                               kind))
            p = make_params(kind, Axis(args.axis), args.alpha_frac, sigma,
                            mpf(args.c_shift), args.n1, n2)
            approx = build_lp(p)
            save_approximant(approx, args.out)
            print(f"built {kind.value}/{args.axis} n1={args.n1} n2={n2} at {bits} bits "
                  f"-> {args.out}")
        return 0

    if args.subcommand == "converge":
        n_max = max(args.n1_list) + 64  # n2 upper estimate for precision sizing
        bits = _resolve_precision(args, kind, args.alpha_frac, sigma_96, n_max)
        with mpnum.workprec(bits):
            sigma = _resolve_sigma(args, kind)
            records = run_convergence(kind, Axis(args.axis), args.alpha_frac,
                                      args.n1_list, sigma=sigma, n2_mode=args.n2_mode,
                                      c_shift=mpf(args.c_shift), n_log=args.n_log,
                                      n_lin=args.n_lin)
            emit_csv(records, args.out)
            if len(records) >= 3:
                fit = fit_exponent([(r.n, r.sup_err) for r in records],
                                   default_fit_floor())
                print(f"fitted rho = {to_decimal(fit.rho_hat, 10)} over "
                      f"{fit.points_used} points (predicted "
                      f"{to_decimal(records[0].predicted_rho, 10)})")
        return 0

    if args.subcommand == "quaderr":
        bits = _resolve_precision(args, kind, args.alpha_frac, sigma_96,
                                  max(args.n1_list))
        with mpnum.workprec(bits):
            sigma = _resolve_sigma(args, kind)
            records = run_quaderr(kind, args.alpha_frac, sigma, args.n1_list)
            emit_csv(records, args.out)
            if len(records) >= 3:
                fit = fit_exponent([(r.n1, r.sup_quad_err) for r in records],
                                   default_fit_floor())
                print(f"fitted quadrature exponent = {to_decimal(fit.rho_hat, 10)} "
                      f"over {fit.points_used} points")
        return 0

    raise _UsageError(f"unknown subcommand {args.subcommand!r}")


def main(argv=None) -> int:
    try:
        args = parse_args(argv if argv is not None else sys.argv[1:])
    except _UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    try:
        return _run(args)
    except _UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OracleError as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ApproximantFormatError as e:
        print(f"file error: {e}", file=sys.stderr)
        return EXIT_IO
    except OSError as e:
        print(f"i/o error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
