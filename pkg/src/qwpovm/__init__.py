"""Coined quantum walks as generalized qubit measurements."""

__version__ = "0.1.0"

from .errors import DomainError, PlanningError, SamplingError, ScheduleError, ValidationError
from .walk import (
    CoinSchedule,
    WalkerCoinState,
    WalkSpec,
    apply_step,
    evolve,
    l1_distance,
    position_distribution,
    state_fidelity,
)
from .povm import PovmElement, kraus_from_walk, match_rank1, povm_from_kraus, povm_from_spec

__all__ = [
    "__version__",
    "CoinSchedule",
    "WalkerCoinState",
    "WalkSpec",
    "apply_step",
    "evolve",
    "l1_distance",
    "position_distribution",
    "state_fidelity",
    "PovmElement",
    "kraus_from_walk",
    "povm_from_kraus",
    "povm_from_spec",
    "match_rank1",
    "DomainError",
    "PlanningError",
    "SamplingError",
    "ScheduleError",
    "ValidationError",
]
