"""Assembly of the lightning-plus-polynomial approximant.

The rectangular sum over the quadrature nodes splits exactly into a
pole-residue part over the clustered poles plus a smooth remainder (constant
term and far poles of magnitude >= 1).  The remainder is analytic well beyond
[0, 1] and is truncated to a short shifted-Chebyshev series; its degree only
needs to grow like sqrt(N1).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import gmpy2
from gmpy2 import mpfr

from . import mpnum
from .mpnum import mpf
from .poles import PoleSet, tapered_poles, to_imaginary, uniform_poles
from .scheme import Axis, Kind, SchemeParams, sin_ratio

__all__ = [
    "PoleResidueForm",
    "ChebTail",
    "BuildDiagnostics",
    "LPApproximant",
    "N2Rule",
    "DEFAULT_OVERSAMPLE",
    "clustered_residues",
    "tail_function",
    "chebyshev_truncate",
    "n2_rule",
    "build_lp",
    "bernstein_rho",
]

DEFAULT_OVERSAMPLE = 4


class N2Rule(enum.Enum):
    FIG = "fig"       # ceil(1.3*sqrt(n1)), the rule used in the convergence figures
    BOUND = "bound"   # ceil(sqrt(n1*h)/log(2+sqrt(3))) + 2, the analytic sufficient degree


@dataclass(frozen=True)
class PoleResidueForm:
    """Clustered poles with their residues, in matching order."""

    poles: PoleSet
    residues: tuple[mpfr, ...]


@dataclass(frozen=True)
class ChebTail:
    """Truncated Chebyshev series of the smooth remainder.

    Coefficients are in the shifted basis T_k(2x - 1); an imaginary-axis
    approximant evaluates the same series at x**2 (basis T_k(2x**2 - 1)).
    ``trunc_bound`` is the a priori tail bound 2V/((rho1-1)*rho1**degree)
    with rho1 = 2 + sqrt(3) and V the sampled maximum of the remainder.
    """

    degree: int
    coeffs: tuple[mpfr, ...]
    v_max: mpfr
    trunc_bound: mpfr


@dataclass(frozen=True)
class BuildDiagnostics:
    trunc_T_bound: mpfr        # analytic window-truncation bound 3*e**-T
    tail_bound: mpfr           # == tail.trunc_bound
    build_precision_bits: int


@dataclass(frozen=True)
class LPApproximant:
    """Evaluable pole-residue + Chebyshev-tail approximant of x**alpha.

    Immutable after build; safe to share across concurrent evaluators.
    """

    params: SchemeParams
    pole_part: PoleResidueForm
    tail: ChebTail
    diagnostics: BuildDiagnostics

    def imag_pole_view(self) -> PoleSet:
        """The +/- i*b_j magnitudes of the stored real pole family."""
        return to_imaginary(self.pole_part.poles)


def bernstein_rho() -> mpfr:
    """Ellipse parameter 2 + sqrt(3) governing the tail truncation decay."""
    return 2 + gmpy2.sqrt(mpfr(3))


def clustered_residues(ps: PoleSet) -> PoleResidueForm:
    """Residues of the clustered poles, from the quadrature-node weights.

    Tapered: a_j = -pref/2 * sqrt(h/j) * |p_j|**(1+alpha); uniform (node m):
    a_m = -pref * hbar * |q_m|**(1+alpha); pref = sin(alpha*pi)/(alpha*pi).
    Magnitudes are the C = 1 ones; a C != 1 configuration rescales at
    evaluation time only.
    """
    if ps.axis is not Axis.REAL:
        raise ValueError("clustered_residues requires a real-axis pole set")
    p = ps.params
    c = p.c_shift
    bits = mpnum.current_precision()
    with mpnum.workprec(bits + 32):
        pref = sin_ratio(p)
        out = []
        if p.kind is Kind.TAPERED:
            sqrt_h = gmpy2.sqrt(p.step)
            for j, pole in enumerate(ps.values, start=1):
                mag = abs(pole) if c == 1 else abs(pole) / c
                out.append(-(pref / 2) * sqrt_h / gmpy2.sqrt(mpfr(j)) * mag ** (1 + p.alpha))
        else:
            for pole in ps.values:
                mag = abs(pole) if c == 1 else abs(pole) / c
                out.append(-pref * p.step * mag ** (1 + p.alpha))
    with mpnum.workprec(bits):
        out = [+a for a in out]
    form = PoleResidueForm(poles=ps, residues=tuple(out))
    assert all(a < 0 for a in form.residues)
    return form


@lru_cache(maxsize=8)
def _tail_terms(ps: PoleSet):
    """(constant part, far weights, far magnitudes) so the tail is const + sum w*x/(x+m)."""
    p = ps.params
    pref = sin_ratio(p)
    sqrt_n1 = gmpy2.sqrt(mpfr(p.n1))
    const = mpfr(0)
    far_w = []
    far_m = []
    if p.kind is Kind.TAPERED:
        sa = p.sigma * p.alpha
        sqrt_h = gmpy2.sqrt(p.step)
        acc = mpfr(0)
        for j in range(1, p.n1 + 1):
            sj = gmpy2.sqrt(mpfr(j))
            acc += mpnum.exp(sa * (sj - sqrt_n1)) / sj
        const = (pref / 2) * sqrt_h * acc
        for j in range(p.n1 + 1, p.n_total + 1):
            sj = gmpy2.sqrt(mpfr(j))
            far_w.append((pref / 2) * sqrt_h / sj * mpnum.exp(sa * (sj - sqrt_n1)))
            far_m.append(mpnum.exp(p.sigma * (sj - sqrt_n1)))
    else:
        hb = p.step
        acc = mpfr(0)
        for j in range(0, p.n1):
            acc += mpnum.exp((j - p.n1) * hb)
        const = pref * hb * acc
        for j in range(p.n1, p.n_total + 1):
            far_w.append(pref * hb * mpnum.exp((j - p.n1) * hb))
            far_m.append(mpnum.exp((j - p.n1) * hb / p.alpha))
    return const, tuple(far_w), tuple(far_m)


def tail_function(x, ps: PoleSet) -> mpfr:
    """Smooth remainder of the rectangular sum: constant part plus far poles.

    The far poles all lie in (-inf, -1], so the function is analytic on a
    neighbourhood of [0, 1]; its sampled maximum stays below 4.
    """
    if ps.axis is not Axis.REAL:
        raise ValueError("tail_function requires a real-axis pole set")
    x = mpf(x)
    const, far_w, far_m = _tail_terms(ps)
    total = const
    for w, m in zip(far_w, far_m):
        total += w * x / (x + m)
    return total


def chebyshev_truncate(g, n2: int, oversample: int = DEFAULT_OVERSAMPLE) -> ChebTail:
    """Degree-n2 truncation of the Chebyshev series of g on [0, 1].

    Samples g at oversample*(n2+1) Chebyshev-Lobatto points and applies the
    discrete Chebyshev transform by direct summation; oversampling pushes the
    aliased coefficients far past degree n2.  Records the sampled maximum V
    and the a priori bound 2V/((rho1-1)*rho1**n2).
    """
    if n2 < 0:
        raise ValueError(f"n2 must be >= 0, got {n2}")
    if oversample < 4:
        raise ValueError(f"oversample must be >= 4, got {oversample}")
    m = oversample * (n2 + 1) - 1
    pi = mpnum.pi()
    costab = [gmpy2.cos(pi * i / m) for i in range(m + 1)]
    xs = [(c + 1) / 2 for c in costab]
    gs = [mpf(g(x)) for x in xs]
    v_max = max(abs(v) for v in gs)

    def folded(t: int) -> mpfr:
        t %= 2 * m
        return costab[2 * m - t] if t > m else costab[t]

    coeffs = []
    for k in range(n2 + 1):
        acc = gs[0] / 2
        for i in range(1, m):
            acc += gs[i] * folded(i * k)
        acc += gs[m] / 2 * (1 if k % 2 == 0 else -1)
        coeffs.append(acc * 2 / m if k > 0 else acc / m)

    rho1 = bernstein_rho()
    bound = 2 * v_max / ((rho1 - 1) * rho1 ** n2)
    return ChebTail(degree=n2, coeffs=tuple(coeffs), v_max=v_max, trunc_bound=mpfr(bound))


def n2_rule(n1: int, step, mode: N2Rule, kind: Kind = Kind.TAPERED) -> int:
    """Tail degree rule: the figures' ceil(1.3*sqrt(n1)) or the analytic bound.

    The analytic bound is ceil(T/log(2+sqrt(3))) + 2, the degree at which the
    tail truncation drops below e**-T; T is sqrt(n1*step) for the tapered
    scheme and n1*step for the uniform one.
    """
    if n1 < 1:
        raise ValueError(f"n1 must be >= 1, got {n1}")
    if mode is N2Rule.FIG:
        # ceil(sqrt(169*n1/100)) in exact integer arithmetic: 1.3*sqrt(100) must
        # not round past 13
        num = 169 * n1
        m = math.isqrt(num // 100)
        while m * m * 100 < num:
            m += 1
        return m
    if mode is N2Rule.BOUND:
        t = gmpy2.sqrt(n1 * mpf(step)) if kind is Kind.TAPERED else n1 * mpf(step)
        return int(gmpy2.ceil(t / mpnum.log(bernstein_rho()))) + 2
    raise TypeError(f"mode must be an N2Rule, got {mode!r}")


def build_lp(p: SchemeParams) -> LPApproximant:
    """Build the full approximant for one configuration.

    The pole part and tail always live on the real axis; an imaginary-axis
    configuration reuses them with argument x**2 at evaluation time.
    """
    ps = tapered_poles(p) if p.kind is Kind.TAPERED else uniform_poles(p)
    form = clustered_residues(ps)
    tail = chebyshev_truncate(lambda x: tail_function(x, ps), p.n2)
    assert tail.v_max < 4
    diag = BuildDiagnostics(
        trunc_T_bound=mpfr(3 * mpnum.exp(-p.t_cap)),
        tail_bound=tail.trunc_bound,
        build_precision_bits=mpnum.current_precision(),
    )
    return LPApproximant(params=p, pole_part=form, tail=tail, diagnostics=diag)
