# fronts package
from .state import (
    FrontKind, Front, Functionals, FrontState,
    psi, generalized_strength, functionals, profile, mass,
    fronts_from_pattern, init_from_data, strength_bounds, sup_envelope,
)
from .tracking import (
    Interaction, Diagnostic, CauchyResult, next_interaction, resolve_interaction, advance,
    run_bounds, check_bounds, run_cauchy,
)
