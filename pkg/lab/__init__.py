# lab package
from .extraction import PlateauPair, extract_pair, plateau_score
from .sweep import (
    ComparisonReport, matched_tw_alpha, refined, inner_far_state,
    riemann_run, numerical_kinetic_function, compare_tables,
)
