"""Two-phase geometric optics beyond caustics: WKB fields, uniform Airy
fields, and semiclassical Wigner functions for the fold singularity."""

__version__ = "0.1.0"

from .specfun import AccuracyPolicy, AiryValues, airy, airy_square_integral
from .rays import (
    LinearLayerParams,
    RayPath,
    RefractionProfile1D,
    airy_arrivals,
    airy_profile,
    airy_ray_closed,
    constant_profile,
    find_caustic,
    integrate_hamiltonian,
    linear_layer_arrivals,
    linear_layer_caustic_depth,
    linear_layer_jacobian,
    linear_layer_momentum,
    linear_layer_ray,
)
from .wkb import (
    BranchField,
    CausticZoneWarning,
    WkbField,
    airy_greens,
    airy_inner_approx,
    airy_wkb_branches,
    airy_wkb_field,
    airy_wkb_right,
    linear_layer_phases,
    source_amplitude,
)
from .kl import KlAmplitudes, KlCoordinates, kl_amplitudes, kl_coordinates, kl_field
from .stphase import (
    CfuCoefficients,
    SmallAlphaPoints,
    StationaryPoint,
    cfu_eval,
    cfu_match,
    cfu_small_alpha,
    standard_spa,
)
from .wigner import (
    PhaseSpaceGrid,
    QuadraturePolicy,
    SmoothPhase,
    TruncationWarning,
    WaveFunctionSampler,
    chord_points,
    semiclassical_wigner_local,
    semiclassical_wigner_uniform,
    weak_limit_pairing,
    wigner_exact_airy,
    wigner_moment0,
    wigner_moment1,
    wigner_numeric,
    wigner_via_fourier,
)
from .surgery import (
    NoStationaryPointWarning,
    RegionLabel,
    SingularCurvatureWarning,
    StationaryPointReport,
    WignerBranchIntegral,
    classify_region,
    combined_wkb_wigner,
    diagonal_asymptotics,
    k_integral_amplitude,
    k_integral_flux,
    liouville_residual,
    offdiagonal_asymptotics,
    stationary_points,
    stationary_wigner_residual,
    wigner_branches,
    wigner_phase_eval,
)
