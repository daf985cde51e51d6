"""Airy functions and the closed-form oscillatory integrals built on them.

The Airy pair (Ai, Bi) and first derivatives are evaluated from scratch:
a Maclaurin series summed in extended precision near the origin, and the
standard large-argument asymptotic expansions beyond a switch radius.  The
module also provides two exact integral identities used throughout the
phase-space code: the full-line integral of Ai over a quadratic argument
(which produces Ai^2) and the half-line Fourier integral of a power.

Everything here is real-argument only.  The downstream semiclassical code
never needs complex Airy arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "AccuracyPolicy",
    "AiryValues",
    "DEFAULT_POLICY",
    "airy",
    "airy_square_integral",
    "fourier_power_integral",
]

# Series constants c1 = Ai(0) = 3^{-2/3}/Gamma(2/3) and c2 = -Ai'(0) =
# 3^{-1/3}/Gamma(1/3), parsed at full extended precision.  The positive-z
# cancellation in c1*f - c2*g amplifies any error in these by ~e^{2 zeta},
# so they must be good to the last long-double bit.
_LD = np.longdouble
_C1 = _LD("0.3550280538878172392600631860041831763980")  # Ai(0)
_C2 = _LD("0.2588194037928067984051835601892039634791")  # -Ai'(0)
_SQRT3 = np.sqrt(_LD(3.0))

# The Maclaurin series for Ai at z > 0 cancels like exp(2*zeta),
# zeta = (2/3) z^{3/2}, so even the 80-bit accumulator runs out of digits
# near z ~ 6.5 and the exponential asymptotics must take over earlier on
# the positive side than on the negative side (where cancellation only
# grows like exp(zeta) and the oscillatory expansion is the weaker one).
_POSITIVE_SERIES_MAX = 6.3

_N_ASYMPTOTIC_TERMS = 46


def _asymptotic_coefficients(n):
    """u_k, v_k of the Airy asymptotic expansions (DLMF 9.7.2)."""
    u = np.empty(n)
    v = np.empty(n)
    u[0] = 1.0
    v[0] = 1.0
    for k in range(n - 1):
        u[k + 1] = u[k] * (6 * k + 1) * (6 * k + 3) * (6 * k + 5) / (
            216.0 * (k + 1) * (2 * k + 1)
        )
        v[k + 1] = u[k + 1] * (6 * (k + 1) + 1) / (1.0 - 6 * (k + 1))
    return u, v


_U, _V = _asymptotic_coefficients(_N_ASYMPTOTIC_TERMS)


@dataclass(frozen=True)
class AccuracyPolicy:
    """Evaluation tolerances shared across the package.

    abs_tol and rel_tol are the guarantees the special-function layer is
    allowed to assume when it compares two quantities (for example when
    deciding that an amplitude combination vanishes identically).
    series_asymptotic_switch is the |z| radius beyond which the Airy
    evaluation leaves the Maclaurin series.  On the positive axis the
    series is abandoned at min(switch, 6.3) regardless, see module notes.
    """

    abs_tol: float = 1e-12
    rel_tol: float = 1e-9
    series_asymptotic_switch: float = 7.8

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.series_asymptotic_switch <= 0:
            raise ValueError("series_asymptotic_switch must be positive")


DEFAULT_POLICY = AccuracyPolicy()


@dataclass(frozen=True)
class AiryValues:
    """Ai, Bi and first derivatives on a common set of points."""

    ai: np.ndarray
    ai_prime: np.ndarray
    bi: np.ndarray
    bi_prime: np.ndarray


def _series(z):
    """Maclaurin evaluation in long double; valid for any z, accurate while
    the terms do not overwhelm the 80-bit accumulator."""
    z = z.astype(_LD)
    z3 = z * z * z
    # Term recurrences for f, g, f', g' (classical ascending series).
    c = np.ones_like(z)  # f terms
    d = z.copy()  # g terms
    e = 0.5 * z * z  # f' terms
    h = np.ones_like(z)  # g' terms
    f, g, fp, gp = c.copy(), d.copy(), e.copy(), h.copy()
    for k in range(250):
        c = c * z3 / ((3 * k + 2) * (3 * k + 3))
        d = d * z3 / ((3 * k + 3) * (3 * k + 4))
        e = e * z3 / ((3 * k + 3) * (3 * k + 5))
        h = h * z3 / ((3 * k + 1) * (3 * k + 3))
        f += c
        g += d
        fp += e
        gp += h
        if max(
            np.max(np.abs(c)), np.max(np.abs(d)), np.max(np.abs(e)), np.max(np.abs(h))
        ) < _LD(1e-26):
            break
    ai = _C1 * f - _C2 * g
    bi = _SQRT3 * (_C1 * f + _C2 * g)
    aip = _C1 * fp - _C2 * gp
    bip = _SQRT3 * (_C1 * fp + _C2 * gp)
    return (
        ai.astype(np.float64),
        aip.astype(np.float64),
        bi.astype(np.float64),
        bip.astype(np.float64),
    )


def _optimally_truncated(zeta, coeffs, signs):
    """Sum coeffs[k] * signs^k * zeta^{-k} stopping, per element, just before
    the terms start growing (the usual super-asymptotic truncation)."""
    total = np.full_like(zeta, coeffs[0])
    term = np.ones_like(zeta)
    prev_mag = np.full_like(zeta, np.inf)
    active = np.ones(zeta.shape, dtype=bool)
    for k in range(1, len(coeffs)):
        term = term * signs / zeta
        new = coeffs[k] * term
        mag = np.abs(new)
        grow = mag >= prev_mag
        active &= ~grow
        if not active.any():
            break
        total[active] += new[active]
        prev_mag[active] = mag[active]
    return total


def _asymptotic_positive(z):
    zeta = (2.0 / 3.0) * z ** 1.5
    root4 = z ** 0.25
    s_ai = _optimally_truncated(zeta, _U, -1.0)
    s_aip = _optimally_truncated(zeta, _V, -1.0)
    s_bi = _optimally_truncated(zeta, _U, 1.0)
    s_bip = _optimally_truncated(zeta, _V, 1.0)
    expm = np.exp(-zeta)
    sqrt_pi = math.sqrt(math.pi)
    ai = expm / (2.0 * sqrt_pi * root4) * s_ai
    aip = -root4 * expm / (2.0 * sqrt_pi) * s_aip
    # Bi legitimately exceeds float range beyond z ~ 104; inf is the
    # honest saturation value there
    with np.errstate(over="ignore"):
        expp = np.exp(zeta)
        bi = expp / (sqrt_pi * root4) * s_bi
        bip = root4 * expp / sqrt_pi * s_bip
    return ai, aip, bi, bip


def _asymptotic_negative(z):
    t = -z
    zeta = (2.0 / 3.0) * t ** 1.5
    root4 = t ** 0.25
    chi = zeta - 0.25 * math.pi
    # Even/odd splits of the u and v sequences feed the oscillatory forms.
    zeta2 = zeta * zeta
    p = _optimally_truncated(zeta2, _U[0::2], -1.0)
    q = _optimally_truncated(zeta2, _U[1::2], -1.0) / zeta
    r = _optimally_truncated(zeta2, _V[0::2], -1.0)
    s = _optimally_truncated(zeta2, _V[1::2], -1.0) / zeta
    sqrt_pi = math.sqrt(math.pi)
    cos_chi = np.cos(chi)
    sin_chi = np.sin(chi)
    ai = (cos_chi * p + sin_chi * q) / (sqrt_pi * root4)
    bi = (-sin_chi * p + cos_chi * q) / (sqrt_pi * root4)
    aip = root4 / sqrt_pi * (sin_chi * r - cos_chi * s)
    bip = root4 / sqrt_pi * (cos_chi * r + sin_chi * s)
    return ai, aip, bi, bip


def airy(z, policy: AccuracyPolicy | None = None) -> AiryValues:
    """Evaluate Ai, Ai', Bi, Bi' at real z (scalar or array).

    Maclaurin series inside the policy switch radius (extended-precision
    accumulation), asymptotic expansions outside.  Relative accuracy is
    ~1e-12 on [-10, 6] and never worse than the policy rel_tol guarantee
    of 1e-9 (the weakest band is 6.2 < z < 6.9, where series cancellation
    and the asymptotic truncation floor meet).
    """
    if policy is None:
        policy = DEFAULT_POLICY
    z_arr = np.asarray(z, dtype=np.float64)
    if not np.all(np.isfinite(z_arr)):
        raise ValueError("airy requires finite real arguments")
    flat = np.atleast_1d(z_arr).ravel()

    neg_switch = policy.series_asymptotic_switch
    pos_switch = min(policy.series_asymptotic_switch, _POSITIVE_SERIES_MAX)

    out = [np.empty(flat.shape) for _ in range(4)]
    ser = (flat >= -neg_switch) & (flat <= pos_switch)
    pos = flat > pos_switch
    neg = flat < -neg_switch

    for mask, evaluator in (
        (ser, _series),
        (pos, _asymptotic_positive),
        (neg, _asymptotic_negative),
    ):
        if mask.any():
            vals = evaluator(flat[mask])
            for dst, src in zip(out, vals):
                dst[mask] = src

    shaped = [a.reshape(z_arr.shape) for a in out]
    if z_arr.ndim == 0:
        shaped = [float(a) for a in shaped]
    return AiryValues(*shaped)


def airy_square_integral(r1: float, r2: float, r3: float,
                         policy: AccuracyPolicy | None = None) -> float:
    """Integral over the whole k-line of Ai(r1 k^2 + r2 k + r3), r1 > 0.

    Closed form: (2 pi / sqrt(r1)) * 2^{-1/3} * Ai^2 evaluated at
    -(r2^2 - 4 r1 r3) / 4^{4/3} / r1.  This is what turns the phase-space
    Airy profile into the squared-Airy amplitude on configuration space.
    """
    if r1 <= 0:
        raise ValueError("airy_square_integral requires r1 > 0")
    arg = -(r2 * r2 - 4.0 * r1 * r3) / (4.0 ** (4.0 / 3.0) * r1)
    ai = airy(arg, policy).ai
    return (2.0 * math.pi / math.sqrt(r1)) * 2.0 ** (-1.0 / 3.0) * ai * ai


def fourier_power_integral(gamma: float, nu: float, p: float) -> complex:
    """Half-line Fourier integral of a power:
    integral_0^inf t^gamma exp(i nu t^p) dt for gamma > -1, nu != 0, p >= 1.

    Equals |nu|^{-(gamma+1)/p} Gamma((gamma+1)/p) / p times the phase
    exp(i pi (gamma+1) sgn(nu) / (2p)).  For (gamma+1)/p >= 1 the integral
    only exists as an Abel-regularized limit; the closed form is returned
    in that reading.
    """
    if gamma <= -1.0:
        raise ValueError("fourier_power_integral requires gamma > -1")
    if nu == 0.0:
        raise ValueError("fourier_power_integral requires nu != 0")
    if p < 1.0:
        raise ValueError("fourier_power_integral requires p >= 1")
    expo = (gamma + 1.0) / p
    magnitude = abs(nu) ** (-expo) * math.gamma(expo) / p
    phase = math.pi * (gamma + 1.0) * math.copysign(1.0, nu) / (2.0 * p)
    return magnitude * complex(math.cos(phase), math.sin(phase))
