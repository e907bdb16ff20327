"""Numerical laboratory for Fourier multipliers on product Hardy spaces.

The package computes, at desk scale, the functionals that govern
multiplier boundedness in the product setting: dyadic-block energies of
torus symbols with their modulated-Fejer witnesses, classical cube
oscillations with the Parseval oscillation identity and the
Sledd-Stegenga lattice condition, and the Chang-Fefferman-style open-set
functionals built from two-parameter wavelet lifts, including the
factored variant whose equivalence is studied empirically.

Suprema over infinite families (all cubes, all scales, the whole Hardy
ball) are everywhere replaced by documented finite families; every such
value is a certified lower bound, and every identity the constructions
rely on is checked at stated tolerances.
"""

from .errors import IdentityError, ProdHardyError
from .grid import GridSpec, SampledFunction2D, sample_function, torus_grid, window_grid
from .spectral import (
    Convention,
    SpectralArray,
    continuous_transform,
    continuous_transform_values,
    dual_frequencies,
    evaluate_trig,
    fourier_coeffs,
    full_spectrum,
    inverse_fourier,
    pairing_frequency,
    pairing_space,
    rescale_check,
)
from .torus import (
    DyadicBlock,
    LacunarySupport,
    MultiplierGrid,
    apply_multiplier,
    block_energy,
    complete_blocks,
    condition_constant,
    fejer_closed_form_1d,
    fejer_coeffs_1d,
    fejer_kernel_1d,
    fejer_product,
    h1_membership,
    necessity_witness,
    paley_ratio,
    torus_l1,
)
from .classical import (
    CubeSpec,
    MeasureAtoms,
    bmo_norm,
    cube_coefficients,
    cube_oscillation,
    dyadic_cube_family,
    pairing_chain_report,
    sledd_stegenga_condition,
    spectral_oscillation_identity,
)
from .wavelet import WaveletProfile, build_psi, log_nodes
from .dyadic import (
    DyadicInterval,
    DyadicRectangle,
    OpenSetMask,
    enumerate_dyadic_rectangles,
)
from .lifting import (
    LiftEngine,
    LiftFamily,
    UpperHalfLift,
    band_nodes,
    convolve_psi_y,
    lift_family,
    psi_y_kernel,
    rect_slices,
    s_function,
    s_r_squared,
)
from .functionals import (
    carleson_box_energy,
    factored_functional,
    factored_vs_spectral,
    projection_sum_energy,
    rectangle_projection,
    spectral_box_functional,
    symbol_sup_functional,
    wavelet_scale_identity,
)

__version__ = "0.1.0"
