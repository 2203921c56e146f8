"""Simulator and verification harness for a chemotaxis-haptotaxis angiogenesis model."""

from .model import Grid, InitialReport, Params, ShapeError, State, steady_state, validate_initial_data
from .stepper import StepConfig, Trajectory, run, step

__all__ = [
    "Grid", "InitialReport", "Params", "ShapeError", "State", "StepConfig", "Trajectory",
    "run", "steady_state", "step", "validate_initial_data",
]
__version__ = "0.1.0"
