# schemes package
from .fluxes import (
    ec_flux_2pt, ec_flux, ec_entropy_flux, potential, b_coefficient, B_STAR_MODES, ORDERS, EXPECTED_ORDERS,
)
from .operators import (
    SchemeConfig, GridState, GHOST, pad, second_difference, third_difference,
    interface_fluxes, interface_entropy_fluxes, flux_divergence,
    controlled_dissipation_rhs, entropy_residual, flux_truncation_errors, observed_orders,
)
from .integrate import Diagnostics, time_step, integrate, entropy_drift_ratio
