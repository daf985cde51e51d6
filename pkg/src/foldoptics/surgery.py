"""Phase-space surgery on the two-phase WKB field.

Squaring a two-branch WKB wave and Wigner-transforming it produces four
oscillatory integrals: two diagonal (branch with itself) and two cross
terms.  Their stationary points organize along the manifold parabola
x = k^2 and the conjugate parabola x = 2 k^2.  Classifying each integral
region by region, matching the diagonal fold pairs with the cubic
canonical integral, and discarding the cross terms where they cancel or
dephase reassembles everything into a single Airy profile in phase
space.  This module carries that classification table, the regional
asymptotics, the recombined closed form, its moment identities, and the
residual stencils for the transport equation the limit object solves.

Unfolding-parameter and sign conventions, frozen once:

    branch 1 (+,+)   phase F1, stationary for k > 0, alpha = k - sqrt(x)
    branch 2 (-,-)   phase F2 = -F1(.; x, -k), stationary for k < 0,
                     alpha = k + sqrt(x)
    branch 3 (+,-)   phase F3, one stationary point, interior only
    branch 4 (-,+)   phase F4 = -F3(.; x, -k), mirror of branch 3
"""

from __future__ import annotations

import cmath
import enum
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np

from .rays import RefractionProfile1D
from .specfun import airy, airy_square_integral
from .stphase import CfuCoefficients, StationaryPoint, cfu_eval, cfu_match
from .wigner import PhaseSpaceGrid

__all__ = [
    "REGION_TOL",
    "RegionLabel",
    "NoStationaryPointWarning",
    "SingularCurvatureWarning",
    "WignerBranchIntegral",
    "StationaryPointReport",
    "wigner_branches",
    "classify_region",
    "wigner_phase_eval",
    "stationary_points",
    "diagonal_asymptotics",
    "offdiagonal_asymptotics",
    "combined_wkb_wigner",
    "k_integral_amplitude",
    "k_integral_flux",
    "liouville_residual",
    "stationary_wigner_residual",
]

# Half-width of the tolerance band around the parabolas x = k^2 and
# x = 2 k^2 (scaled by max(1, x)).
REGION_TOL = 1e-12

_ROOT_TOL = 1e-10

_DIAGONAL = (1, 2)
_OFFDIAGONAL = (3, 4)


class RegionLabel(enum.Enum):
    EXTERIOR = "Exterior"
    ON_MANIFOLD = "OnManifold"
    BETWEEN = "Between"
    ON_CONJUGATE = "OnConjugate"
    INTERIOR = "Interior"


class NoStationaryPointWarning(UserWarning):
    """The requested branch has no stationary point at this (x, k)."""


class SingularCurvatureWarning(UserWarning):
    """Stationary-point curvature diverges on the conjugate parabola."""


@dataclass(frozen=True)
class WignerBranchIntegral:
    """One of the four branch integrals: amplitude D(sigma, x) and phase
    F(sigma; x, k) with closed-form sigma-derivatives to third order."""

    index: int
    D: Callable[[float, float], complex]
    F: Callable[[float, float, float], float]
    F_sigma: Callable[[float, float, float], float]
    F_sigmasigma: Callable[[float, float, float], float]
    F_sigmasigmasigma: Callable[[float, float, float], float]

    def __post_init__(self):
        if self.index not in (1, 2, 3, 4):
            raise ValueError("branch index must be 1, 2, 3 or 4")


@dataclass(frozen=True)
class StationaryPointReport:
    """Stationary set of one branch at one phase-space point, labeled by
    the classification cell it instantiates."""

    region: RegionLabel
    points: Tuple[StationaryPoint, ...]
    table_cell: str


def wigner_branches(x0: float) -> Tuple[WignerBranchIntegral, ...]:
    """The four branch integrals of the squared two-phase field with
    source abscissa x0, in index order 1..4."""
    if x0 <= 0:
        raise ValueError("x0 must be positive")
    amp = 0.25 / math.sqrt(x0)

    def d_diag(sigma, x):
        return complex(amp * (x * x - sigma * sigma) ** -0.25)

    def d_plus_minus(sigma, x):
        return -1j * d_diag(sigma, x)

    def d_minus_plus(sigma, x):
        return 1j * d_diag(sigma, x)

    def f1(sigma, x, k):
        return (2.0 / 3.0) * ((x + sigma) ** 1.5 - (x - sigma) ** 1.5) - 2.0 * k * sigma

    def f1_s(sigma, x, k):
        return math.sqrt(x + sigma) + math.sqrt(x - sigma) - 2.0 * k

    def f1_ss(sigma, x, k):
        return 0.5 * ((x + sigma) ** -0.5 - (x - sigma) ** -0.5)

    def f1_sss(sigma, x, k):
        return -0.25 * ((x + sigma) ** -1.5 + (x - sigma) ** -1.5)

    def f2(sigma, x, k):
        return -f1(sigma, x, -k)

    def f2_s(sigma, x, k):
        return -f1_s(sigma, x, -k)

    def f2_ss(sigma, x, k):
        return -f1_ss(sigma, x, k)

    def f2_sss(sigma, x, k):
        return -f1_sss(sigma, x, k)

    def f3(sigma, x, k):
        return (2.0 / 3.0) * ((x + sigma) ** 1.5 + (x - sigma) ** 1.5) - 2.0 * k * sigma

    def f3_s(sigma, x, k):
        return math.sqrt(x + sigma) - math.sqrt(x - sigma) - 2.0 * k

    def f3_ss(sigma, x, k):
        return 0.5 * ((x + sigma) ** -0.5 + (x - sigma) ** -0.5)

    def f3_sss(sigma, x, k):
        return -0.25 * ((x + sigma) ** -1.5 - (x - sigma) ** -1.5)

    def f4(sigma, x, k):
        return -f3(sigma, x, -k)

    def f4_s(sigma, x, k):
        return -f3_s(sigma, x, -k)

    def f4_ss(sigma, x, k):
        return -f3_ss(sigma, x, k)

    def f4_sss(sigma, x, k):
        return -f3_sss(sigma, x, k)

    return (
        WignerBranchIntegral(1, d_diag, f1, f1_s, f1_ss, f1_sss),
        WignerBranchIntegral(2, d_diag, f2, f2_s, f2_ss, f2_sss),
        WignerBranchIntegral(3, d_plus_minus, f3, f3_s, f3_ss, f3_sss),
        WignerBranchIntegral(4, d_minus_plus, f4, f4_s, f4_ss, f4_sss),
    )


def classify_region(x: float, k: float) -> RegionLabel:
    """Place (x, k) relative to the parabolas x = k^2 and x = 2 k^2."""
    if x <= 0.0:
        raise ValueError("region classification is defined in the illuminated zone x > 0")
    tol = REGION_TOL * max(1.0, abs(x))
    kk = k * k
    if abs(x - kk) <= tol:
        return RegionLabel.ON_MANIFOLD
    if x < kk:
        return RegionLabel.EXTERIOR
    if abs(x - 2.0 * kk) <= tol:
        return RegionLabel.ON_CONJUGATE
    if x < 2.0 * kk:
        return RegionLabel.BETWEEN
    return RegionLabel.INTERIOR


def wigner_phase_eval(
    w: WignerBranchIntegral, sigma: float, x: float, k: float
) -> Tuple[float, float, float, float]:
    """(F, F_sigma, F_sigmasigma, F_sigmasigmasigma) at real sigma."""
    if abs(sigma) >= x:
        raise ValueError(
            "complex phase: |sigma| >= x leaves the illuminated zone x - |sigma| > 0"
        )
    return (
        w.F(sigma, x, k),
        w.F_sigma(sigma, x, k),
        w.F_sigmasigma(sigma, x, k),
        w.F_sigmasigmasigma(sigma, x, k),
    )


def _phase_gradient(index: int, sigma: complex, x: float, k: float) -> complex:
    # complex-capable F_sigma, used as the independent residual check
    sp = cmath.sqrt(x + sigma)
    sm = cmath.sqrt(x - sigma)
    if index == 1:
        return sp + sm - 2.0 * k
    if index == 2:
        return -sp - sm - 2.0 * k
    if index == 3:
        return sp - sm - 2.0 * k
    return -sp + sm - 2.0 * k


def _verified(
    w: WignerBranchIntegral, x: float, k: float, point: StationaryPoint
) -> StationaryPoint:
    scale = max(1.0, math.sqrt(x) + abs(k))
    loc = complex(point.location)
    if (
        point.is_real
        and point.multiplicity == "simple"
        and math.isfinite(point.second_derivative)
        and abs(loc.real) < x
    ):
        polished = loc.real - w.F_sigma(loc.real, x, k) / point.second_derivative
        if abs(polished) < x and abs(polished - loc.real) < 1e-6 * scale:
            loc = complex(polished)
    residual = abs(_phase_gradient(w.index, loc, x, k))
    if residual > _ROOT_TOL * scale:
        raise RuntimeError(
            f"stationary point {loc} of branch {w.index} fails the gradient "
            f"check: |F_sigma| = {residual:.3e}"
        )
    if point.is_real and loc != complex(point.location):
        return StationaryPoint(loc, point.multiplicity, point.second_derivative)
    return point


def _report(
    w: WignerBranchIntegral,
    region: RegionLabel,
    raw: Tuple[StationaryPoint, ...],
    x: float,
    k: float,
    cell: str,
) -> StationaryPointReport:
    pts = tuple(_verified(w, x, k, p) for p in raw)
    return StationaryPointReport(region, pts, f"F{w.index} @ {region.value}: {cell}")


def _diagonal_points(
    w: WignerBranchIntegral, x: float, k: float, region: RegionLabel
) -> StationaryPointReport:
    sign_ok = k > 0.0 if w.index == 1 else k < 0.0
    if not sign_ok:
        return StationaryPointReport(
            region, (), f"F{w.index} @ {region.value}: none (wrong-sign k)"
        )
    if region is RegionLabel.EXTERIOR:
        b = math.sqrt(k * k - x)
        # curvature is purely imaginary off the axis; the field stores its
        # magnitude sqrt(k^2-x)/(2k^2-x)
        mag = b / (2.0 * k * k - x)
        pts = (
            StationaryPoint(2j * abs(k) * b, "simple", mag),
            StationaryPoint(-2j * abs(k) * b, "simple", mag),
        )
        return _report(w, region, pts, x, k, "imaginary conjugate pair, simple")
    if region is RegionLabel.ON_MANIFOLD:
        pts = (StationaryPoint(0j, "double", 0.0),)
        return _report(w, region, pts, x, k, "sigma = 0, double (fold point)")
    if region is RegionLabel.BETWEEN:
        sigma0 = 2.0 * abs(k) * math.sqrt(x - k * k)
        pts = (
            StationaryPoint(complex(sigma0), "simple", w.F_sigmasigma(sigma0, x, k)),
            StationaryPoint(complex(-sigma0), "simple", w.F_sigmasigma(-sigma0, x, k)),
        )
        return _report(w, region, pts, x, k, "real pair +/-sigma0, simple")
    if region is RegionLabel.ON_CONJUGATE:
        top = -math.inf if w.index == 1 else math.inf
        pts = (
            StationaryPoint(complex(x), "simple", top),
            StationaryPoint(complex(-x), "simple", -top),
        )
        return _report(
            w, region, pts, x, k, "real pair at the window edge, curvature diverges"
        )
    return StationaryPointReport(region, (), f"F{w.index} @ {region.value}: none")


def _offdiagonal_points(
    w: WignerBranchIntegral, x: float, k: float, region: RegionLabel
) -> StationaryPointReport:
    orient = 1.0 if w.index == 3 else -1.0
    if region is RegionLabel.INTERIOR:
        sigma_s = orient * math.copysign(1.0, k) * 2.0 * abs(k) * math.sqrt(x - k * k)
        if k == 0.0:
            sigma_s = 0.0
        pts = (
            StationaryPoint(complex(sigma_s), "simple", w.F_sigmasigma(sigma_s, x, k)),
        )
        return _report(w, region, pts, x, k, "single real point, simple")
    if region is RegionLabel.ON_CONJUGATE:
        sigma_s = orient * math.copysign(x, k)
        pts = (StationaryPoint(complex(sigma_s), "simple", orient * math.inf),)
        return _report(
            w, region, pts, x, k, "window-edge point, curvature diverges"
        )
    return StationaryPointReport(region, (), f"F{w.index} @ {region.value}: none")


def stationary_points(
    w: WignerBranchIntegral, x: float, k: float
) -> StationaryPointReport:
    """Closed-form stationary set of branch w at (x, k), each real point
    re-verified against the phase gradient."""
    region = classify_region(x, k)
    if w.index in _DIAGONAL:
        return _diagonal_points(w, x, k, region)
    return _offdiagonal_points(w, x, k, region)


def diagonal_asymptotics(
    index: int, x: float, k: float, epsilon: float, x0: float
) -> float:
    """Airy-form approximation of a diagonal branch integral.

    Between the parabolas the two real stationary points are matched with
    the cubic canonical integral; on and outside the manifold the
    coalesced / imaginary pair yields the same canonical data with
    xi = 2^{2/3} (x - k^2) continued to xi <= 0.
    """
    if index not in _DIAGONAL:
        raise ValueError("diagonal branches are indices 1 and 2")
    if epsilon <= 0 or x0 <= 0:
        raise ValueError("epsilon and x0 must be positive")
    region = classify_region(x, k)
    if region in (RegionLabel.ON_CONJUGATE, RegionLabel.INTERIOR):
        raise ValueError(
            "diagonal Airy asymptotics hold strictly inside the conjugate "
            "parabola (x < 2 k^2)"
        )
    sign_ok = k > 0.0 if index == 1 else k < 0.0
    if not sign_ok:
        warnings.warn(
            f"branch {index} has no stationary points for this sign of k; "
            "its contribution is 0",
            NoStationaryPointWarning,
            stacklevel=2,
        )
        return 0.0
    if region is RegionLabel.BETWEEN:
        w = wigner_branches(x0)[index - 1]
        sigma0 = 2.0 * abs(k) * math.sqrt(x - k * k)
        first, second = sorted(
            (sigma0, -sigma0), key=lambda s: w.F(s, x, k), reverse=True
        )
        c = cfu_match(
            w.F(first, x, k),
            w.F(second, x, k),
            w.D(first, x),
            w.D(second, x),
            w.F_sigmasigma(first, x, k),
            w.F_sigmasigma(second, x, k),
        )
    else:
        a0 = 2.0 ** (-4.0 / 3.0) / math.sqrt(x0)
        c = CfuCoefficients(0.0, 2.0 ** (2.0 / 3.0) * (x - k * k), a0, 0j)
    return (cfu_eval(c, 1.0 / epsilon) / (math.pi * epsilon)).real


def offdiagonal_asymptotics(
    index: int, x: float, k: float, epsilon: float, x0: float
) -> complex:
    """Leading contribution of a cross-branch integral.

    Interior: a single nondegenerate stationary point gives an O(eps^-1/2)
    oscillation; the index-3 and index-4 terms are complex conjugates.
    Exterior: the pair cancels exactly; the individual values are defined
    only up to that cancellation and the convention here puts +E on
    index 3.  Between the parabolas there is no stationary point and the
    contribution is 0.
    """
    if index not in _OFFDIAGONAL:
        raise ValueError("off-diagonal branches are indices 3 and 4")
    if epsilon <= 0 or x0 <= 0:
        raise ValueError("epsilon and x0 must be positive")
    region = classify_region(x, k)
    if region in (RegionLabel.BETWEEN, RegionLabel.ON_MANIFOLD):
        return 0j
    if region is RegionLabel.EXTERIOR:
        q = k * k - x
        e = (
            2.0 ** -2.5
            / math.sqrt(math.pi * epsilon * x0)
            * q ** -0.25
            * math.exp(-4.0 * q ** 1.5 / (3.0 * epsilon))
        )
        return complex(e) if index == 3 else complex(-e)
    if region is RegionLabel.ON_CONJUGATE:
        warnings.warn(
            "cross-branch curvature diverges on x = 2 k^2; returning the "
            "interior limit",
            SingularCurvatureWarning,
            stacklevel=2,
        )
    s = x - k * k
    w3 = (
        -1j
        * 2.0 ** -1.5
        / math.sqrt(math.pi * epsilon * x0)
        * s ** -0.25
        * cmath.exp(1j * (math.pi / 4.0 + 4.0 * s ** 1.5 / (3.0 * epsilon)))
    )
    return w3 if index == 3 else w3.conjugate()


def combined_wkb_wigner(x, k, epsilon: float, x0: float, extended: bool = False):
    """Recombined phase-space asymptotics of the two-phase WKB field:
    (1/(2 sqrt(x0))) (2/eps)^{2/3} Ai((2/eps)^{2/3} (k^2 - x)).

    The diagonal fold pairs supply this Airy profile where they live and
    its exponential tail outside the manifold; the interior cross-term
    oscillation reproduces its large-argument cosine; the exterior cross
    terms cancel.  With extended=True the same closed form is evaluated
    for x <= 0 (shadow zone), where it decays superexponentially.
    """
    if epsilon <= 0 or x0 <= 0:
        raise ValueError("epsilon and x0 must be positive")
    x_arr = np.asarray(x, dtype=float)
    k_arr = np.asarray(k, dtype=float)
    if not extended and np.any(x_arr <= 0.0):
        raise ValueError(
            "x must be positive in the illuminated zone; pass extended=True "
            "to evaluate the closed form in the shadow"
        )
    scale = (2.0 / epsilon) ** (2.0 / 3.0)
    out = 0.5 / math.sqrt(x0) * scale * airy(scale * (k_arr ** 2 - x_arr)).ai
    if np.isscalar(x) and np.isscalar(k):
        return float(out)
    return out


def k_integral_amplitude(
    x: float, epsilon: float, x0: float, extended: bool = False
) -> float:
    """Zeroth k-moment of the recombined Wigner profile in closed form:
    pi eps^{-1/3} x0^{-1/2} Ai^2(-eps^{-2/3} x)."""
    if epsilon <= 0 or x0 <= 0:
        raise ValueError("epsilon and x0 must be positive")
    if not extended and x <= 0.0:
        raise ValueError(
            "x must be positive in the illuminated zone; pass extended=True "
            "to evaluate the closed form in the shadow"
        )
    r1 = (2.0 / epsilon) ** (2.0 / 3.0)
    return 0.5 / math.sqrt(x0) * r1 * airy_square_integral(r1, 0.0, -r1 * x)


def k_integral_flux(
    x: float, epsilon: float, x0: float, k_max: float = 3.0, samples: int = 1201
) -> float:
    """First k-moment of the recombined profile on a symmetric grid.

    The integrand k * W(x, k) is odd in k, so the trapezoid sum cancels
    pairwise and the value is 0 to roundoff.
    """
    if k_max <= 0:
        raise ValueError("k_max must be positive")
    if samples < 9:
        raise ValueError("need at least 9 quadrature samples")
    ks = np.linspace(-k_max, k_max, samples)
    w = combined_wkb_wigner(x, ks, epsilon, x0)
    return float(np.trapezoid(ks * w, ks))


def _interior_gradients(g: PhaseSpaceGrid):
    xs = np.asarray(g.xs, dtype=float)
    ks = np.asarray(g.ks, dtype=float)
    if xs.size < 3 or ks.size < 3:
        raise ValueError("residual stencil needs at least 3 points in x and in k")
    values = np.asarray(g.values)
    fx = np.gradient(values, xs, axis=0)
    fk = np.gradient(values, ks, axis=1)
    return xs, ks, fx, fk


def liouville_residual(g: PhaseSpaceGrid) -> PhaseSpaceGrid:
    """Residual k df/dx + (1/2) df/dk on the interior of the grid.

    Any profile of the form f(x, k) = G(x - k^2) is annihilated exactly;
    the stencil is second order in the grid spacings.
    """
    xs, ks, fx, fk = _interior_gradients(g)
    res = ks[None, :] * fx + 0.5 * fk
    return PhaseSpaceGrid(xs[1:-1], ks[1:-1], res[1:-1, 1:-1], g.epsilon)


def stationary_wigner_residual(
    profile: RefractionProfile1D, g: PhaseSpaceGrid, epsilon: float
) -> PhaseSpaceGrid:
    """Residual k df/dx + (1/2) (eta^2)'(x) df/dk on the interior grid.

    The transport closure is exact only when (eta^2)''' vanishes
    identically: every higher dispersion correction carries a third or
    higher derivative of eta^2, so linear and quadratic media satisfy the
    same equation as the eps -> 0 limit.  Profiles with curvature in
    (eta^2)' are rejected rather than approximated.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    xs, ks, fx, fk = _interior_gradients(g)
    p = profile.eta_squared_prime
    for xq in np.linspace(xs[0], xs[-1], 7):
        h = 1e-2 * max(1.0, abs(xq))
        third = (p(xq + h) - 2.0 * p(xq) + p(xq - h)) / (h * h)
        if abs(third) > 1e-6 * max(1.0, abs(p(xq))):
            raise ValueError(
                "unsupported profile: (eta^2)''' != 0 introduces dispersion "
                "terms beyond the transport closure"
            )
    transport = np.array([p(float(xq)) for xq in xs])
    res = ks[None, :] * fx + 0.5 * transport[:, None] * fk
    return PhaseSpaceGrid(xs[1:-1], ks[1:-1], res[1:-1, 1:-1], g.epsilon)
