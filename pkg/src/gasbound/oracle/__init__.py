"""Exact one-dimensional oracle: partition functions, densities and identity checks."""

from .activity import ActivityField, InvariantError, chain_modulation, step_modulation
from .checks import (
    CheckResult,
    ZeroScanReport,
    check_contraction_bound,
    check_density_correspondence,
    check_log_z_identity,
    check_modulation_bound,
    check_recursion_identity,
    check_self_map,
    density_boundary_condition,
    neighbourhood_scan,
    tonks_window_estimates,
    tree_recursion_eval,
    zero_free_scan,
)
from .partition import (
    OracleConfig,
    PartitionResult,
    ZeroFreenessViolation,
    one_point_density,
    partition_function,
    partition_result,
    partition_terms,
    potential_energy,
    tonks_partition_function,
    tonks_reference,
)
from .region import Interval, Region1D

__all__ = [name for name in dir() if not name.startswith("_")]
