"""
Coin-space measurement induced by a walk followed by a position measurement.

Evolving the two coin basis states through the walk and reading off the
spinor left at each final site gives the columns of a Kraus operator
``K_x``; the induced POVM element is ``E_x = K_x^dagger K_x``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .walk import CoinSchedule, WalkSpec, as_operator, as_spinor, evolve

__all__ = [
    "PovmElement",
    "kraus_from_walk",
    "kraus_from_spec",
    "povm_from_kraus",
    "povm_from_spec",
    "completeness_residual",
    "outcome_probabilities",
    "match_rank1",
]

ZERO_KRAUS = 1e-12


@dataclass(frozen=True, eq=False)
class PovmElement:
    position: int
    matrix: NDArray[np.complex128]

    def probability(self, psi: ArrayLike) -> float:
        v = as_spinor(psi)
        return float(np.vdot(v, self.matrix @ v).real)


def kraus_from_walk(schedule: CoinSchedule, steps: int, start: int = 0) -> dict[int, NDArray[np.complex128]]:
    """Kraus operators ``{x: K_x}`` of an ``steps``-step walk started at ``start``.

    Every site of the reachable lattice ``start - steps, ..., start + steps``
    (same parity) is listed, with an explicit zero matrix where nothing
    arrives.
    """
    cols = []
    for basis in (np.array([1, 0]), np.array([0, 1])):
        spec = WalkSpec(steps, basis, schedule, start)
        cols.append(evolve(spec))
    kraus = {}
    for x in range(start - steps, start + steps + 1, 2):
        k = np.column_stack([cols[0].spinor(x), cols[1].spinor(x)])
        if np.linalg.norm(k) < ZERO_KRAUS:
            k = np.zeros((2, 2), dtype=np.complex128)
        k.flags.writeable = False
        kraus[x] = k
    return kraus


def kraus_from_spec(spec: WalkSpec) -> dict[int, NDArray[np.complex128]]:
    return kraus_from_walk(spec.schedule, spec.steps, spec.start)


def povm_from_kraus(kraus: Mapping[int, ArrayLike]) -> list[PovmElement]:
    elements = []
    for x in sorted(kraus):
        k = as_operator(kraus[x])
        e = k.conj().T @ k
        e = (e + e.conj().T) / 2
        e.flags.writeable = False
        elements.append(PovmElement(x, e))
    return elements


def povm_from_spec(spec: WalkSpec) -> list[PovmElement]:
    return povm_from_kraus(kraus_from_spec(spec))


def completeness_residual(elements: list[PovmElement]) -> float:
    """Max-entry deviation of ``sum_x E_x`` from the identity."""
    total = sum((e.matrix for e in elements), np.zeros((2, 2), dtype=np.complex128))
    return float(np.abs(total - np.eye(2)).max())


def outcome_probabilities(elements: list[PovmElement], psi: ArrayLike) -> dict[int, float]:
    return {e.position: e.probability(psi) for e in elements}


def match_rank1(element: PovmElement | ArrayLike, target: ArrayLike, weight: float,
                tol: float = 1e-8) -> tuple[bool, float]:
    """Compare ``E`` against ``weight * |target><target|``.

    Returns ``(matched, residual)`` with ``residual`` the max-entry deviation.
    """
    e = element.matrix if isinstance(element, PovmElement) else as_operator(element)
    t = as_spinor(target)
    residual = float(np.abs(e - weight * np.outer(t, t.conj())).max())
    return residual <= tol, residual
