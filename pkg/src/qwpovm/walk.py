"""
Sparse simulation of a one-dimensional coined quantum walk.

The walker lives on the integers and carries a two-level coin. Each step
applies a (possibly site-dependent) coin rotation ``C[n, x]`` to the spinor
at every occupied position and then shifts the ``|0>`` component one site to
the right and the ``|1>`` component one site to the left.

States are stored sparsely as ``{position: spinor}`` maps, so an ``N``-step
walk touches at most ``N + 1`` sites per step.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import ScheduleError, ValidationError

__all__ = [
    "IDENTITY",
    "SIGMA_X",
    "HADAMARD",
    "as_operator",
    "as_spinor",
    "is_unitary",
    "is_hermitian",
    "is_psd",
    "WalkerCoinState",
    "CoinSchedule",
    "WalkSpec",
    "apply_step",
    "evolve",
    "position_distribution",
    "l1_distance",
    "state_fidelity",
]

PRUNE_NORM2 = 1e-30
NORM_TOL = 1e-9
UNITARY_TOL = 1e-10

IDENTITY = np.eye(2, dtype=np.complex128)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2.0)

for _m in (IDENTITY, SIGMA_X, HADAMARD):
    _m.flags.writeable = False


def as_operator(m: ArrayLike) -> NDArray[np.complex128]:
    """Return ``m`` as a read-only 2x2 complex array, checking shape and finiteness."""
    a = np.array(m, dtype=np.complex128)
    if a.shape != (2, 2):
        raise ValidationError(f"expected a 2x2 matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError("matrix has non-finite entries")
    a.flags.writeable = False
    return a


def as_spinor(v: ArrayLike) -> NDArray[np.complex128]:
    a = np.array(v, dtype=np.complex128).reshape(-1)
    if a.shape != (2,):
        raise ValidationError(f"expected a 2-component spinor, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError("spinor has non-finite entries")
    a.flags.writeable = False
    return a


def is_unitary(m: ArrayLike, tol: float = UNITARY_TOL) -> bool:
    a = np.asarray(m, dtype=np.complex128)
    return bool(np.abs(a.conj().T @ a - np.eye(a.shape[0])).max() <= tol)


def is_hermitian(m: ArrayLike, tol: float = 1e-12) -> bool:
    a = np.asarray(m, dtype=np.complex128)
    return bool(np.abs(a - a.conj().T).max() <= tol)


def is_psd(m: ArrayLike, tol: float = 1e-10) -> bool:
    """Hermitian with all eigenvalues >= -tol."""
    a = np.asarray(m, dtype=np.complex128)
    if not is_hermitian(a, tol=max(tol, 1e-12)):
        return False
    return bool(np.linalg.eigvalsh((a + a.conj().T) / 2).min() >= -tol)


class WalkerCoinState:
    """Immutable sparse walker-coin state ``sum_x |x> (a_x|0> + b_x|1>)``.

    Spinors with squared norm below ``1e-30`` are dropped on construction.
    Normalization is not enforced so that linear combinations can be formed;
    use :meth:`norm` to check it.
    """

    __slots__ = ("_amps",)

    def __init__(self, amplitudes: Mapping[int, ArrayLike]):
        amps = {}
        for x, s in amplitudes.items():
            v = np.array(s, dtype=np.complex128).reshape(2)
            if float(np.vdot(v, v).real) >= PRUNE_NORM2:
                v.flags.writeable = False
                amps[int(x)] = v
        self._amps = MappingProxyType(dict(sorted(amps.items())))

    @classmethod
    def localized(cls, coin: ArrayLike, position: int = 0) -> "WalkerCoinState":
        """Walker at ``position`` with coin spinor ``coin``."""
        return cls({position: as_spinor(coin)})

    @property
    def amplitudes(self) -> Mapping[int, NDArray[np.complex128]]:
        return self._amps

    @property
    def positions(self) -> tuple[int, ...]:
        return tuple(self._amps)

    def spinor(self, x: int) -> NDArray[np.complex128]:
        """Coin spinor at ``x`` (zero if unoccupied)."""
        return self._amps.get(x, np.zeros(2, dtype=np.complex128))

    def norm(self) -> float:
        return float(np.sqrt(sum(np.vdot(s, s).real for s in self._amps.values())))

    def items(self) -> Iterator[tuple[int, NDArray[np.complex128]]]:
        return iter(self._amps.items())

    def __add__(self, other: "WalkerCoinState") -> "WalkerCoinState":
        keys = set(self._amps) | set(other._amps)
        return WalkerCoinState({x: self.spinor(x) + other.spinor(x) for x in keys})

    def __mul__(self, c: complex) -> "WalkerCoinState":
        return WalkerCoinState({x: c * s for x, s in self._amps.items()})

    __rmul__ = __mul__

    def allclose(self, other: "WalkerCoinState", atol: float = 1e-12) -> bool:
        keys = set(self._amps) | set(other._amps)
        return all(np.abs(self.spinor(x) - other.spinor(x)).max() <= atol for x in keys)

    def __repr__(self) -> str:
        body = ", ".join(f"{x}: {np.round(s, 6).tolist()}" for x, s in self._amps.items())
        return f"WalkerCoinState({{{body}}})"


class CoinSchedule:
    """Site- and step-dependent coin assignment ``(n, x) -> C[n, x]``.

    Steps are 1-based. Unlisted ``(n, x)`` pairs act as the identity. Every
    stored operator must be unitary to within ``1e-10``.
    """

    __slots__ = ("_coins",)

    def __init__(self, coins: Mapping[tuple[int, int], ArrayLike] | None = None):
        checked = {}
        for key, m in (coins or {}).items():
            try:
                n, x = (int(k) for k in key)
            except (TypeError, ValueError) as exc:
                raise ScheduleError(f"schedule key must be (step, position), got {key!r}") from exc
            if n < 1:
                raise ScheduleError(f"step index must be >= 1, got {n} at position {x}")
            try:
                op = as_operator(m)
            except ValidationError as exc:
                raise ScheduleError(f"coin at step {n}, position {x}: {exc}") from exc
            if not is_unitary(op):
                raise ScheduleError(f"coin at step {n}, position {x} is not unitary")
            checked[(n, x)] = op
        self._coins = MappingProxyType(dict(sorted(checked.items())))

    def coin(self, n: int, x: int) -> NDArray[np.complex128]:
        return self._coins.get((n, x), IDENTITY)

    def items(self) -> Iterable[tuple[tuple[int, int], NDArray[np.complex128]]]:
        return self._coins.items()

    def at_step(self, n: int) -> dict[int, NDArray[np.complex128]]:
        """Scheduled coins of step ``n`` keyed by position."""
        return {x: m for (k, x), m in self._coins.items() if k == n}

    @property
    def last_step(self) -> int:
        return max((n for n, _ in self._coins), default=0)

    def __len__(self) -> int:
        return len(self._coins)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CoinSchedule):
            return NotImplemented
        return self._coins.keys() == other._coins.keys() and all(
            np.array_equal(m, other._coins[k]) for k, m in self._coins.items()
        )

    def __repr__(self) -> str:
        return f"CoinSchedule({len(self._coins)} coins, last step {self.last_step})"


@dataclass(frozen=True, eq=False)
class WalkSpec:
    """Everything needed to run a walk: length, start site, coin and schedule."""

    steps: int
    coin: NDArray[np.complex128]
    schedule: CoinSchedule = field(default_factory=CoinSchedule)
    start: int = 0

    def __post_init__(self):
        if int(self.steps) != self.steps or self.steps < 0:
            raise ValidationError(f"step count must be a non-negative integer, got {self.steps}")
        coin = as_spinor(self.coin)
        if abs(np.linalg.norm(coin) - 1.0) > NORM_TOL:
            raise ValidationError(f"initial coin spinor is not normalized (norm {np.linalg.norm(coin):.12g})")
        object.__setattr__(self, "coin", coin)
        object.__setattr__(self, "steps", int(self.steps))
        object.__setattr__(self, "start", int(self.start))
        if not isinstance(self.schedule, CoinSchedule):
            object.__setattr__(self, "schedule", CoinSchedule(self.schedule))

    def initial_state(self) -> WalkerCoinState:
        return WalkerCoinState.localized(self.coin, self.start)

    def with_coin(self, coin: ArrayLike) -> "WalkSpec":
        return WalkSpec(self.steps, coin, self.schedule, self.start)


def apply_step(state: WalkerCoinState, schedule: CoinSchedule, n: int) -> WalkerCoinState:
    """Apply ``U_n = T (sum_x |x><x| (x) C[n, x])`` to ``state``."""
    if n < 1:
        raise ValidationError(f"step index must be >= 1, got {n}")
    out: dict[int, NDArray[np.complex128]] = {}
    zero = np.zeros(2, dtype=np.complex128)
    for x, s in state.items():
        a, b = schedule.coin(n, x) @ s
        out.setdefault(x + 1, zero.copy())[0] += a
        out.setdefault(x - 1, zero.copy())[1] += b
    return WalkerCoinState(out)


def evolve(spec: WalkSpec, state: WalkerCoinState | None = None) -> WalkerCoinState:
    """Run ``spec.steps`` steps from ``spec``'s initial state (or ``state`` if given)."""
    psi = spec.initial_state() if state is None else state
    for n in range(1, spec.steps + 1):
        psi = apply_step(psi, spec.schedule, n)
    return psi


def position_distribution(state: WalkerCoinState) -> dict[int, float]:
    """Born-rule probabilities ``P(x) = ||spinor at x||^2``."""
    return {x: float(np.vdot(s, s).real) for x, s in state.items()}


def l1_distance(p: Mapping[int, float], q: Mapping[int, float]) -> float:
    """Total-variation distance ``1/2 sum_x |p(x) - q(x)|`` over the union of supports."""
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(x, 0.0) - q.get(x, 0.0)) for x in keys)


def state_fidelity(rho: ArrayLike, target: ArrayLike) -> float:
    """Overlap ``<target| rho |target>`` of a qubit density matrix with a pure state."""
    r = as_operator(rho)
    if not is_hermitian(r, tol=1e-10):
        raise ValidationError("density matrix is not Hermitian")
    t = as_spinor(target)
    if abs(np.linalg.norm(t) - 1.0) > NORM_TOL:
        raise ValidationError("target state is not normalized")
    return float(np.vdot(t, r @ t).real)
