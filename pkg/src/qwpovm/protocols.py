"""
Coin schedules and analytic predictions for the two measurement protocols.

* Unambiguous discrimination of ``|phi+-> = cos(phi/2)|0> +- sin(phi/2)|1>``
  with a three-step walk: ``x = +1`` (``x = -1``) identifies ``|phi+>``
  (``|phi->``) with certainty, ``x = 3`` is inconclusive.
* A qubit SIC-POVM from a six-step walk: each outcome ``x`` realizes one
  element ``|xi_i><xi_i| / 2``.

Angles are in degrees at the API boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from numpy.typing import NDArray

from .errors import DomainError, ValidationError
from .walk import HADAMARD, SIGMA_X, CoinSchedule, WalkSpec

__all__ = [
    "UsdSpec",
    "UsdOutcome",
    "usd_states",
    "usd_coin",
    "usd_schedule",
    "usd_input",
    "usd_expected",
    "usd_overlap",
    "USD_CONCLUSIVE_PLUS",
    "USD_CONCLUSIVE_MINUS",
    "USD_INCONCLUSIVE",
    "SicSpec",
    "LAMBDA",
    "sic_vectors",
    "sic_inputs",
    "SIC_POSITIONS",
    "sic_coins",
    "sic_schedule",
    "sic_expected",
]

USD_CONCLUSIVE_PLUS = 1
USD_CONCLUSIVE_MINUS = -1
USD_INCONCLUSIVE = 3

UsdInput = Literal["plus", "minus", "superposition"]


def _check_phi(phi: float) -> float:
    if not (0.0 < phi <= 90.0):
        raise DomainError(f"phi must lie in (0, 90] degrees, got {phi}")
    return math.radians(phi)


def usd_states(phi: float) -> tuple[NDArray[np.complex128], NDArray[np.complex128]]:
    """The pair ``(|phi+>, |phi->)`` for ``phi`` in degrees."""
    h = _check_phi(phi) / 2
    c, s = math.cos(h), math.sin(h)
    return np.array([c, s], dtype=np.complex128), np.array([c, -s], dtype=np.complex128)


def usd_overlap(phi: float) -> float:
    """``|<phi+|phi->|`` computed from the state vectors."""
    plus, minus = usd_states(phi)
    return float(abs(np.vdot(plus, minus)))


def _cos_deg(phi: float) -> float:
    # exact zero at 90 degrees
    return math.sin(math.radians(90.0 - phi))


def usd_coin(phi: float) -> NDArray[np.complex128]:
    """The phi-dependent reflection applied at ``x = +1`` on step 2.

    Entries are ``r = sqrt(1 - tan^2(phi/2))`` and ``t = tan(phi/2)``; ``r`` is
    evaluated as ``sqrt(cos phi) / cos(phi/2)`` so it vanishes exactly at 90.
    """
    h = _check_phi(phi) / 2
    t = math.tan(h)
    r = math.sqrt(_cos_deg(phi)) / math.cos(h)
    return np.array([[r, t], [t, -r]], dtype=np.complex128)


@dataclass(frozen=True)
class UsdSpec:
    phi: float
    which: UsdInput = "plus"
    a: float = 1.0
    b: float = 1.0

    def __post_init__(self):
        _check_phi(self.phi)
        if self.which not in ("plus", "minus", "superposition"):
            raise ValidationError(f"unknown input {self.which!r}")
        if self.which == "superposition" and self.a == 0 and self.b == 0:
            raise ValidationError("superposition weights (a, b) must not both vanish")


@dataclass(frozen=True)
class UsdOutcome:
    p_plus: float
    p_minus: float
    p_inconclusive: float

    @property
    def eta_err(self) -> float:
        return self.p_inconclusive

    @property
    def ratio(self) -> float:
        """``P(+1) / P(-1)``; ``inf`` when ``P(-1)`` vanishes."""
        if self.p_minus == 0.0:
            return math.inf
        return self.p_plus / self.p_minus

    def as_distribution(self) -> dict[int, float]:
        return {
            USD_CONCLUSIVE_MINUS: self.p_minus,
            USD_CONCLUSIVE_PLUS: self.p_plus,
            USD_INCONCLUSIVE: self.p_inconclusive,
        }


def usd_input(spec: UsdSpec) -> NDArray[np.complex128]:
    """Normalized input coin for ``spec``."""
    plus, minus = usd_states(spec.phi)
    if spec.which == "plus":
        return plus
    if spec.which == "minus":
        return minus
    v = spec.a * plus + spec.b * minus
    return v / np.linalg.norm(v)


def usd_schedule(phi: float, which: UsdInput = "plus", a: float = 1.0, b: float = 1.0) -> WalkSpec:
    """Three-step walk from the origin discriminating ``|phi+->``.

    The phi-dependent coin sits at ``(x=+1, n=2)`` and ``sigma_x`` at
    ``(x=-1, n=2)``; this is the assignment that yields the expected final
    states.
    """
    coins = CoinSchedule({(2, 1): usd_coin(phi), (2, -1): SIGMA_X, (3, 0): HADAMARD})
    return WalkSpec(3, usd_input(UsdSpec(phi, which, a, b)), coins, 0)


def usd_expected(spec: UsdSpec) -> UsdOutcome:
    """Closed-form outcome probabilities of the discrimination walk."""
    cos_phi = _cos_deg(spec.phi)
    s2 = (1.0 - cos_phi) / 2  # sin^2(phi/2)
    if spec.which == "plus":
        a, b = 1.0, 0.0
    elif spec.which == "minus":
        a, b = 0.0, 1.0
    else:
        a, b = float(spec.a), float(spec.b)
    norm2 = a * a + b * b + 2 * a * b * cos_phi
    return UsdOutcome(
        p_plus=2 * a * a * s2 / norm2,
        p_minus=2 * b * b * s2 / norm2,
        p_inconclusive=(a + b) ** 2 * cos_phi / norm2,
    )


@dataclass(frozen=True)
class SicSpec:
    index: int

    def __post_init__(self):
        if self.index not in (1, 2, 3, 4):
            raise ValidationError(f"SIC input index must be 1..4, got {self.index}")


LAMBDA = complex(math.cos(2 * math.pi / 3), math.sin(2 * math.pi / 3))

# final position at which element i is realized, i.e. where input i never lands
SIC_POSITIONS = {1: 6, 2: 4, 3: 0, 4: 2}


def sic_vectors() -> dict[int, NDArray[np.complex128]]:
    """The four SIC vectors ``xi_i``; ``|<xi_i|xi_j>|^2 = 1/3`` for ``i != j``."""
    r2, r3 = math.sqrt(2), math.sqrt(3)
    return {
        1: np.array([1, 0], dtype=np.complex128),
        2: np.array([1, r2], dtype=np.complex128) / r3,
        3: np.array([1, LAMBDA * r2], dtype=np.complex128) / r3,
        4: np.array([1, LAMBDA.conjugate() * r2], dtype=np.complex128) / r3,
    }


def sic_inputs() -> dict[int, NDArray[np.complex128]]:
    """Input coins ``psi_i``, each orthogonal to ``xi_i``."""
    r2, r3 = math.sqrt(2), math.sqrt(3)
    return {
        1: np.array([0, 1], dtype=np.complex128),
        2: np.array([r2, -1], dtype=np.complex128) / r3,
        3: np.array([r2, -LAMBDA], dtype=np.complex128) / r3,
        4: np.array([r2, -LAMBDA.conjugate()], dtype=np.complex128) / r3,
    }


def sic_coins() -> CoinSchedule:
    r2, r3 = math.sqrt(2), math.sqrt(3)
    e = lambda a: complex(math.cos(a), math.sin(a))  # noqa: E731
    pi = math.pi
    return CoinSchedule({
        (2, 1): np.array([[1, -1], [-1, -1]]) / r2,
        (3, 0): np.array([[-1, 1], [1, 1]]) / r2,
        (2, -1): SIGMA_X,
        (4, -1): SIGMA_X,
        (6, -1): SIGMA_X,
        (4, 1): np.array([[r2, 1], [1, -r2]]) / r3,
        (5, 0): np.array([[e(-pi / 3), e(pi / 6)], [e(pi / 3), e(-pi / 6)]]) / r2,
    })


def sic_schedule(index: int) -> WalkSpec:
    """Six-step walk from the origin with input coin ``psi_index``."""
    SicSpec(index)
    return WalkSpec(6, sic_inputs()[index], sic_coins(), 0)


def sic_expected(index: int) -> dict[int, float]:
    """Uniform 1/3 over the three positions other than the forbidden one."""
    SicSpec(index)
    forbidden = SIC_POSITIONS[index]
    return {x: 1 / 3 for x in (0, 2, 4, 6) if x != forbidden}
