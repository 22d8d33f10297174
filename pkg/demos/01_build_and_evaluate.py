"""Build one clustered-pole approximant of x**alpha and look at it.

Constructs the tapered scheme at alpha = 1/2 with the rate-optimal
clustering 2*pi/sqrt(alpha), evaluates it against the reference on a few
points, and round-trips it through the JSON serialization.
"""

import tempfile
from fractions import Fraction
from pathlib import Path

from lppoly import (Axis, Kind, best_sigma, build_lp, eval_lp, make_params, workprec)
from lppoly.cli import load_approximant, save_approximant
from lppoly.mpnum import mpf, to_decimal
from lppoly.oracle import ref_power

ALPHA = Fraction(1, 2)

with workprec(192):
    sigma = best_sigma(Kind.TAPERED, ALPHA)
    params = make_params(Kind.TAPERED, Axis.REAL, ALPHA, sigma, c_shift=1,
                         n1=36, n2=23)
    print(f"scheme: tapered, alpha = {ALPHA}, sigma = {to_decimal(sigma, 12)}")
    print(f"derived: h = {to_decimal(params.step, 12)}, "
          f"T = {to_decimal(params.t_cap, 12)}, nodes N_t = {params.n_total}")

    approx = build_lp(params)
    print(f"\npoles: {len(approx.pole_part.poles.values)} on "
          f"[{to_decimal(approx.pole_part.poles.values[0], 6)}, "
          f"{to_decimal(approx.pole_part.poles.values[-1], 6)}]")
    print(f"tail: degree {approx.tail.degree}, "
          f"a-priori truncation bound {to_decimal(approx.tail.trunc_bound, 6)}")
    print(f"window truncation bound 3e^-T = "
          f"{to_decimal(approx.diagnostics.trunc_T_bound, 6)}")

    print("\n      x           approximant - x^alpha")
    for xs in ("0", "1e-12", "1e-6", "0.25", "0.5", "0.9", "1"):
        x = mpf(xs)
        err = eval_lp(approx, x) - ref_power(x, params.alpha)
        print(f"  {xs:>8}    {to_decimal(err, 6)}")

    path = Path(tempfile.gettempdir()) / "lppoly_demo_approximant.json"
    save_approximant(approx, path)
    again = load_approximant(path)
    x = mpf("0.37")
    print(f"\nsaved to {path}")
    print(f"reloaded eval at 0.37 matches: {eval_lp(approx, x) == eval_lp(again, x)}")
