"""Stationary-phase engines for oscillatory integrals with large parameter.

Two regimes are covered: isolated nondegenerate points (standard formula)
and a pair of coalescing points (uniform Airy-form approximation).  The
uniform coefficients are obtained by asymptotic matching against the
two-point formula; only the leading pair (A0, B0) is carried.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .specfun import airy

__all__ = [
    "StationaryPoint",
    "CfuCoefficients",
    "SmallAlphaPoints",
    "standard_spa",
    "cfu_match",
    "cfu_eval",
    "cfu_small_alpha",
]

_MULTIPLICITIES = ("simple", "double")


@dataclass(frozen=True)
class StationaryPoint:
    """A root of phi' with its order and local curvature.

    Simple points carry the (nonzero) signed second derivative; double
    points have vanishing second derivative by definition, and the caller
    tracks the third derivative separately.
    """

    location: complex
    multiplicity: str
    second_derivative: float

    def __post_init__(self):
        if self.multiplicity not in _MULTIPLICITIES:
            raise ValueError(f"multiplicity must be one of {_MULTIPLICITIES}")
        if self.multiplicity == "simple" and self.second_derivative == 0.0:
            raise ValueError("simple stationary point requires phi'' != 0")
        if self.multiplicity == "double" and self.second_derivative != 0.0:
            raise ValueError("double stationary point requires phi'' = 0")

    @property
    def is_real(self) -> bool:
        return complex(self.location).imag == 0.0


@dataclass(frozen=True)
class CfuCoefficients:
    """Cubic normal form phi0 + tau^3/3 - xi*tau with leading amplitudes."""

    phi0: float
    xi: float
    A0: complex
    B0: complex


@dataclass(frozen=True)
class SmallAlphaPoints:
    """Leading-order stationary pair near coalescence.

    When the reality condition fails the pair is a complex-conjugate one;
    `imaginary` is set and the locations keep their imaginary parts (it is
    the caller's decision whether such points contribute).
    """

    x1: complex
    x2: complex
    xi: float
    imaginary: bool

    def __iter__(self):
        return iter((self.x1, self.x2, self.xi))


def standard_spa(f_at: complex, phi_at: float, phi_xx: float, lam: float) -> complex:
    """Single nondegenerate stationary-point contribution
    f(c) sqrt(2 pi/(lambda |phi''|)) e^{i lambda phi(c) + i mu pi/4},
    mu = sgn phi''."""
    if lam <= 0:
        raise ValueError("lambda must be positive")
    if phi_xx == 0.0:
        raise ValueError("degenerate stationary point (phi'' = 0): use the CFU path")
    mu = 1.0 if phi_xx > 0 else -1.0
    return (
        f_at
        * math.sqrt(2.0 * math.pi / (lam * abs(phi_xx)))
        * cmath.exp(1j * lam * phi_at + 1j * mu * math.pi / 4.0)
    )


def cfu_match(
    phi_1: float,
    phi_2: float,
    f_1: complex,
    f_2: complex,
    phi_xx_1: float,
    phi_xx_2: float,
) -> CfuCoefficients:
    """Match the uniform Airy form against the two-point formula.

    Conventions: point 1 is the maximum (phi'' < 0) with the larger phase,
    point 2 the minimum (phi'' > 0).  The matching system is

        A0 xi^{-1/4} - B0 xi^{1/4} = sqrt(2) f1 / |phi''_1|^{1/2}
        A0 xi^{-1/4} + B0 xi^{1/4} = sqrt(2) f2 / (phi''_2)^{1/2}

    solved exactly for (A0, B0).
    """
    if phi_1 < phi_2:
        raise ValueError("phase ordering violated: need phi_1 >= phi_2")
    if not (phi_xx_1 < 0.0 < phi_xx_2):
        raise ValueError("curvature signs violated: need phi''_1 < 0 < phi''_2")
    if phi_1 == phi_2:
        raise ValueError(
            "coalesced stationary points (xi = 0): use cfu_small_alpha"
        )
    phi0 = 0.5 * (phi_1 + phi_2)
    xi = (0.75 * (phi_1 - phi_2)) ** (2.0 / 3.0)
    r1 = f_1 / math.sqrt(abs(phi_xx_1))
    r2 = f_2 / math.sqrt(phi_xx_2)
    A0 = xi**0.25 * (r1 + r2) / math.sqrt(2.0)
    B0 = xi**-0.25 * (r2 - r1) / math.sqrt(2.0)
    return CfuCoefficients(phi0=phi0, xi=xi, A0=A0, B0=B0)


def cfu_eval(c: CfuCoefficients, lam: float) -> complex:
    """Two-term uniform value
    e^{i lambda phi0} [2 pi A0 lambda^{-1/3} Ai(-lambda^{2/3} xi)
                       - 2 pi i B0 lambda^{-2/3} Ai'(-lambda^{2/3} xi)]."""
    if lam <= 0:
        raise ValueError("lambda must be positive")
    v = airy(-(lam ** (2.0 / 3.0)) * c.xi)
    return cmath.exp(1j * lam * c.phi0) * (
        2.0 * math.pi * c.A0 * lam ** (-1.0 / 3.0) * v.ai
        - 2.0j * math.pi * c.B0 * lam ** (-2.0 / 3.0) * v.ai_prime
    )


def cfu_small_alpha(
    phi_xxx: float, phi_x_alpha: float, alpha: float
) -> SmallAlphaPoints:
    """Leading stationary pair of the unfolded phase near coalescence:

    x_{1,2} = -+ (-2 phi_xxx phi_xalpha alpha)^{1/2} / phi_xxx,
    xi = -2^{1/3} phi_xalpha phi_xxx^{-1/3} alpha.

    Cube roots are real (sign-carrying); a negative radicand produces the
    conjugate-imaginary pair with the `imaginary` flag set.
    """
    if phi_xxx == 0.0:
        raise ValueError("phi_xxx must be nonzero for a fold unfolding")
    radicand = -2.0 * phi_xxx * phi_x_alpha * alpha
    xi = -(2.0 ** (1.0 / 3.0)) * phi_x_alpha * alpha / np.cbrt(phi_xxx)
    if radicand >= 0.0:
        root = math.sqrt(radicand)
        return SmallAlphaPoints(
            x1=-root / phi_xxx, x2=root / phi_xxx, xi=float(xi), imaginary=False
        )
    root = 1j * math.sqrt(-radicand)
    return SmallAlphaPoints(
        x1=-root / phi_xxx, x2=root / phi_xxx, xi=float(xi), imaginary=True
    )
