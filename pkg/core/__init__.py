# core package
from .flux import (
    FluxModel, EntropyPair, ShockData, ShockKind,
    get_flux, get_entropy, cubic_flux, cubic_linear_flux, asym_cubic_flux,
    quadratic_entropy, entropy_pair, capillarity_entropy,
    chord, shock_speed, entropy_dissipation, entropy_dissipation_integral,
    dissipation_slope, oleinik_admissible, degenerate,
)
from .kinetic import (
    KineticFunction, tangent, zero_dissipation, companion, validate_kinetic,
    linear_kinetic, classical_kinetic, tabulated_kinetic,
    cubic_diffusive_dispersive_kinetic, cubic_dispersive_threshold, estimate_constants,
)
from .table import KineticTable, validate_rows, format_table, parse_table, write_table, read_table
