"""
Qubit state reconstruction from SIC-POVM outcome frequencies.

With elements ``E_i = |xi_i><xi_i| / 2`` the Born probabilities are
``p_i = <xi_i|rho|xi_i> / 2`` and the linear inverse is

    rho = sum_i (3 p_i - 1/2) |xi_i><xi_i|.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import ValidationError
from .protocols import SIC_POSITIONS, sic_inputs, sic_vectors
from .walk import as_operator, is_hermitian, state_fidelity

__all__ = [
    "SicOutcome",
    "born_probabilities",
    "reconstruct",
    "project_psd",
    "fidelity_report",
    "density_record",
]

SUM_TOL = 2e-2


@dataclass(frozen=True)
class SicOutcome:
    """Outcome probabilities ``(p_1, ..., p_4)`` indexed by SIC element."""

    p: tuple[float, float, float, float]

    def __post_init__(self):
        p = tuple(float(v) for v in self.p)
        if len(p) != 4:
            raise ValidationError(f"need four probabilities, got {len(p)}")
        if any(not 0.0 <= v <= 1.0 for v in p):
            raise ValidationError(f"probabilities must lie in [0, 1], got {p}")
        if abs(sum(p) - 1.0) > SUM_TOL:
            raise ValidationError(f"probabilities sum to {sum(p):.4f}, too far from 1")
        object.__setattr__(self, "p", p)

    @classmethod
    def from_positions(cls, dist: Mapping[int, float]) -> "SicOutcome":
        """Build from a walker distribution ``{x: P(x)}`` over ``x = 0, 2, 4, 6``."""
        return cls(tuple(float(dist.get(SIC_POSITIONS[i], 0.0)) for i in (1, 2, 3, 4)))


def born_probabilities(rho: ArrayLike) -> tuple[float, float, float, float]:
    r = as_operator(rho)
    xi = sic_vectors()
    return tuple(float(np.vdot(xi[i], r @ xi[i]).real) / 2 for i in (1, 2, 3, 4))


def reconstruct(outcome: SicOutcome | Sequence[float], normalize: bool = True) -> NDArray[np.complex128]:
    """Linear-inversion estimate of the coin density matrix.

    With ``normalize`` the probabilities are rescaled to sum to one first, so
    the result has unit trace; otherwise its trace is ``3 sum(p) - 2``. The
    estimate is not forced to be positive, see :func:`project_psd`.
    """
    p = np.array(outcome.p if isinstance(outcome, SicOutcome) else outcome, dtype=float)
    if normalize:
        p = p / p.sum()
    xi = sic_vectors()
    rho = sum((3 * p[k] - 0.5) * np.outer(xi[k + 1], xi[k + 1].conj()) for k in range(4))
    return (rho + rho.conj().T) / 2


def project_psd(rho: ArrayLike) -> NDArray[np.complex128]:
    """Clip negative eigenvalues to zero and renormalize the spectrum."""
    r = as_operator(rho)
    if not is_hermitian(r, tol=1e-10):
        raise ValidationError("density matrix is not Hermitian")
    w, v = np.linalg.eigh((r + r.conj().T) / 2)
    w = np.clip(w, 0.0, None)
    if w.sum() <= 0:
        raise ValidationError("no positive spectral weight to keep")
    w = w / w.sum()
    return (v * w) @ v.conj().T


def fidelity_report(rows: Sequence[SicOutcome]) -> list[float]:
    """``<psi_i|rho_i|psi_i>`` for rows ordered by input ``psi_1..psi_4``.

    Uses the raw (unprojected) reconstruction.
    """
    if len(rows) != 4:
        raise ValidationError(f"expected four outcome rows, got {len(rows)}")
    psi = sic_inputs()
    return [state_fidelity(reconstruct(row), psi[i]) for i, row in enumerate(rows, start=1)]


def density_record(rho: ArrayLike) -> list[float]:
    """Eight numbers: real parts then imaginary parts, row-major."""
    r = as_operator(rho)
    return [float(v) for v in np.concatenate([r.real.ravel(), r.imag.ravel()])]
