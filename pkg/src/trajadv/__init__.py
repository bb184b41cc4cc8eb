"""Rigid-body task-space control with interaction-driven trajectory advancement.

A feedback-linearization Cartesian controller for planar articulated
chains, a path-following layer whose free parameter speeds up when
external pushes help the task, a deterministic fixed-step simulator that
reproduces the wrench-sweep experiments at desk scale, and a CLI.
"""

from . import advancement, controller, dynamics, sim, trajectory, wrench
from .backend import BACKEND_NAME

__version__ = "0.1.0"

__all__ = [
    "advancement",
    "controller",
    "dynamics",
    "sim",
    "trajectory",
    "wrench",
    "BACKEND_NAME",
    "__version__",
]
