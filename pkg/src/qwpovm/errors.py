"""Exception types raised across the package."""


class ValidationError(ValueError):
    """An input value violates a documented invariant."""


class ScheduleError(ValidationError):
    """A coin schedule holds a non-unitary operator or a malformed key."""


class DomainError(ValueError):
    """A protocol parameter lies outside its admissible range."""


class PlanningError(RuntimeError):
    """No wave-plate arrangement satisfies the per-mode plate budget."""


class SamplingError(RuntimeError):
    """Photon-count sampling produced no detections."""
