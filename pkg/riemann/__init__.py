# riemann package
from .solver import (
    WaveKind, ShockClass, Wave, WavePattern,
    solve_riemann, classify_shock, evaluate, sample, inverse_speed,
    pattern_dissipation, pattern_l1_distance,
)
from .oleinik import envelope_pieces, oleinik_pattern
