"""Generators for the four clustered-pole families.

Real-axis poles sit on [-C, 0); imaginary-axis sets store the positive
magnitudes b_j of the conjugate pairs +/- i*b_j, with b_j**2 equal to the
magnitude of the source real pole.
"""

from __future__ import annotations

from dataclasses import dataclass

import gmpy2
from gmpy2 import mpfr

from . import mpnum
from .scheme import Axis, Kind, SchemeParams

__all__ = ["PoleSet", "tapered_poles", "uniform_poles", "to_imaginary"]


@dataclass(frozen=True)
class PoleSet:
    """Clustered poles of one scheme/axis family, ordered by magnitude.

    RealAxis: ``values`` are the negative poles themselves.
    ImagAxis: ``values`` are the positive magnitudes b_j of the pairs +/- i*b_j.
    """

    kind: Kind
    axis: Axis
    values: tuple[mpfr, ...]
    params: SchemeParams

    def __post_init__(self):
        if self.axis is Axis.REAL and any(v >= 0 for v in self.values):
            raise ValueError("real-axis poles must be strictly negative")
        if self.axis is Axis.IMAG and any(v <= 0 for v in self.values):
            raise ValueError("imaginary-axis magnitudes must be strictly positive")


def tapered_poles(p: SchemeParams) -> PoleSet:
    """Tapered family p_j = -C*exp(-sigma*(sqrt(N1) - sqrt(j))), j = 1..N1.

    Magnitudes increase strictly with j; the last pole is exactly -C.
    Exponents reach sigma*sqrt(N1), so the formula runs with guard bits to
    keep each pole faithful at the working precision.
    """
    if p.kind is not Kind.TAPERED:
        raise ValueError("tapered_poles requires tapered params")
    bits = mpnum.current_precision()
    with mpnum.workprec(bits + 32):
        sqrt_n1 = gmpy2.sqrt(mpfr(p.n1))
        vals = []
        for j in range(1, p.n1 + 1):
            e = -p.sigma * (sqrt_n1 - gmpy2.sqrt(mpfr(j)))
            vals.append(-p.c_shift * gmpy2.exp(e))
    with mpnum.workprec(bits):
        vals = [+v for v in vals]
    return PoleSet(kind=p.kind, axis=Axis.REAL, values=tuple(vals), params=p)


def uniform_poles(p: SchemeParams) -> PoleSet:
    """Uniform family, node-derived: -C*exp(-sigma*(N1 - j)/sqrt(N1)), j = 0..N1-1.

    This is the geometric set {-C*e**(-sigma*m/sqrt(N1)) : m = 1..N1}, i.e. the
    poles produced by the quadrature nodes below the window cap; it is shifted
    by one geometric step against the variant that starts at -C, whose first
    pole the quadrature construction assigns to the far (tail) part instead.
    """
    if p.kind is not Kind.UNIFORM:
        raise ValueError("uniform_poles requires uniform params")
    bits = mpnum.current_precision()
    with mpnum.workprec(bits + 32):
        sqrt_n1 = gmpy2.sqrt(mpfr(p.n1))
        vals = []
        for j in range(p.n1):
            e = -p.sigma * (p.n1 - j) / sqrt_n1
            vals.append(-p.c_shift * gmpy2.exp(e))
    with mpnum.workprec(bits):
        vals = [+v for v in vals]
    return PoleSet(kind=p.kind, axis=Axis.REAL, values=tuple(vals), params=p)


def to_imaginary(ps: PoleSet) -> PoleSet:
    """Square-root image of a real-axis family: b_j = sqrt(|p_j|)."""
    if ps.axis is not Axis.REAL:
        raise ValueError("to_imaginary requires a real-axis pole set")
    vals = tuple(gmpy2.sqrt(abs(v)) for v in ps.values)
    return PoleSet(kind=ps.kind, axis=Axis.IMAG, values=vals, params=ps.params)
