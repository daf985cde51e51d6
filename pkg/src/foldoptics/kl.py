"""Kravtsov-Ludwig uniformization of a two-phase field near a fold.

The two geometric phases S+ >= S- are replaced by the pair
phi = (S+ + S-)/2, rho = ((3/4)(S+ - S-))^{2/3}, and the two blowing-up
amplitudes by the modified pair (g0, g1), finite across the caustic.  The
resulting Airy-form field agrees with both WKB branches away from the
caustic and stays bounded on it.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .rays import RefractionProfile1D
from .specfun import DEFAULT_POLICY, airy

__all__ = [
    "KlCoordinates",
    "KlAmplitudes",
    "kl_coordinates",
    "kl_amplitudes",
    "kl_field",
    "kl_phase_residual",
    "kl_phase_residual_2d",
]


@dataclass(frozen=True)
class KlCoordinates:
    phi: Callable[[float], float]
    rho: Callable[[float], float]


@dataclass(frozen=True)
class KlAmplitudes:
    g0: Callable[[float], complex]
    g1: Callable[[float], complex]


def kl_coordinates(
    S_plus: Callable[[float], float], S_minus: Callable[[float], float]
) -> KlCoordinates:
    """phi = (S+ + S-)/2 and rho = ((3/4)(S+ - S-))^{2/3}.

    Requires S+ >= S- pointwise; evaluation where the ordering fails
    raises rather than returning a complex rho.
    """

    def phi(x: float) -> float:
        return 0.5 * (S_plus(x) + S_minus(x))

    def rho(x: float) -> float:
        gap = S_plus(x) - S_minus(x)
        if gap < 0.0:
            raise ValueError("phase ordering violated: S+ < S-")
        return (0.75 * gap) ** (2.0 / 3.0)

    return KlCoordinates(phi=phi, rho=rho)


def kl_amplitudes(
    A_plus: Callable[[float], complex],
    A_minus: Callable[[float], complex],
    rho: Callable[[float], float],
) -> KlAmplitudes:
    """Modified amplitudes g0 = (rho^{1/4}/sqrt2)(A+ - iA-),
    g1 = (rho^{-1/4}/sqrt2)(A+ + iA-).

    The combination A+ + iA- vanishing makes g1 zero; in that case
    rho^{-1/4} is never evaluated, so g1 is clean on the caustic.  A
    nonvanishing combination at rho = 0 is a genuine singularity and
    raises.
    """

    def g0(x: float) -> complex:
        return (rho(x) ** 0.25 / math.sqrt(2.0)) * (A_plus(x) - 1j * A_minus(x))

    def g1(x: float) -> complex:
        ap, am = A_plus(x), A_minus(x)
        combo = ap + 1j * am
        scale = abs(ap) + abs(am)
        if abs(combo) <= DEFAULT_POLICY.abs_tol * max(scale, 1.0):
            return 0.0 + 0.0j
        r = rho(x)
        if r == 0.0:
            raise ZeroDivisionError(
                "g1 singular: A+ + iA- does not vanish on the caustic"
            )
        return (r ** -0.25 / math.sqrt(2.0)) * combo

    return KlAmplitudes(g0=g0, g1=g1)


def kl_field(
    coords: KlCoordinates, amps: KlAmplitudes, epsilon: float, x: float
) -> complex:
    """Uniform Airy-form field
    sqrt(2 pi) eps^{-1/6} e^{i pi/4} e^{i phi/eps}
    (g0 Ai(-eps^{-2/3} rho) + i eps^{1/3} g1 Ai'(-eps^{-2/3} rho))."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    rho = coords.rho(x)
    v = airy(-(epsilon ** (-2.0 / 3.0)) * rho)
    return (
        math.sqrt(2.0 * math.pi)
        * epsilon ** (-1.0 / 6.0)
        * cmath.exp(1j * math.pi / 4.0)
        * cmath.exp(1j * coords.phi(x) / epsilon)
        * (
            amps.g0(x) * v.ai
            + 1j * epsilon ** (1.0 / 3.0) * amps.g1(x) * v.ai_prime
        )
    )


def kl_phase_residual(
    coords: KlCoordinates,
    profile: RefractionProfile1D,
    xs: Sequence[float],
    h: float = 1e-6,
) -> list:
    """Residuals of the phase system:
    r1 = (phi')^2 + rho (rho')^2 - eta^2,  r2 = phi' rho',
    with derivatives by central differences.  Returns [(r1, r2), ...]."""
    out = []
    for x in xs:
        hx = h * max(abs(x), 1.0)
        phi_p = (coords.phi(x + hx) - coords.phi(x - hx)) / (2.0 * hx)
        rho_p = (coords.rho(x + hx) - coords.rho(x - hx)) / (2.0 * hx)
        r1 = phi_p**2 + coords.rho(x) * rho_p**2 - profile.eta_squared(x)
        r2 = phi_p * rho_p
        out.append((r1, r2))
    return out


def kl_phase_residual_2d(
    phi: Callable[[float, float], float],
    rho: Callable[[float, float], float],
    eta_squared: Callable[[float, float], float],
    points: Sequence,
    h: float = 1e-6,
) -> list:
    """Two-dimensional version of the phase-system residual on (y, z)
    points: r1 = |grad phi|^2 + rho |grad rho|^2 - eta^2, r2 = grad phi . grad rho."""

    def grad(f, y, z):
        hy = h * max(abs(y), 1.0)
        hz = h * max(abs(z), 1.0)
        fy = (f(y + hy, z) - f(y - hy, z)) / (2.0 * hy)
        fz = (f(y, z + hz) - f(y, z - hz)) / (2.0 * hz)
        return fy, fz

    out = []
    for y, z in points:
        py, pz = grad(phi, y, z)
        ry, rz = grad(rho, y, z)
        r1 = py**2 + pz**2 + rho(y, z) * (ry**2 + rz**2) - eta_squared(y, z)
        r2 = py * ry + pz * rz
        out.append((r1, r2))
    return out
