"""Analyticity thresholds for locally stable hard-core gases.

Temperedness constants, the Lambert-W optimizer for the activity threshold,
potential-weighted walk integrals and a brute-force 1D verification oracle.
"""

from .constants import (
    QuadratureError,
    RadialQuadratureConfig,
    TemperednessConstants,
    radial_integral,
    stability_constant,
    temperedness_constants,
)
from .connective import (
    DeltaEstimate,
    SequenceClass,
    VkEstimate,
    classify_sequence,
    delta_phi_upper,
    gamma_c_eval,
    vk_integrand,
    vk_monte_carlo,
    vk_quadrature_1d,
)
from .potentials import (
    PairPotential,
    ThermoState,
    boltzmann,
    builtin,
    evaluate,
    hard_sphere,
    kac_exponential,
    load_potential,
    mayer_abs,
    square_well,
    tabulated,
)
from .threshold import (
    OptimizerSolution,
    ThresholdReport,
    analyticity_threshold,
    contraction_holds,
    lambert_w0,
    m_max,
    self_map_holds,
    solve_optimizer,
    sweep,
)

__version__ = "0.1.0"
