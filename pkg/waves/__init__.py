# waves package
from .model import TwModel, equilibria
from .shooting import Terminal, TwTrajectory, shoot, shifted, closest_approach, truncated, tw_dissipation, energy
from .kinetics import (
    speed_window, is_classical, connection, kinetic_value, kinetic_table,
    classical_threshold, slope_at_zero,
)
