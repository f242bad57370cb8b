"""
Jones calculus for half- and quarter-wave plates and their placement.

Plate angles are in degrees, measured between the optic axis and the
horizontal. Coin operators are realized only up to a global phase: a HWP has
determinant -1 whereas most coins are special unitary.

A plan lists, for every step, the plates in the order the photon meets them.
Each plate covers a set of neighbouring spatial modes. Modes between a target
and the edge of the occupied region cannot be avoided, so a plate aimed at an
inner mode also acts on every occupied mode out to the edge and the spurious
action is undone by additional plates further along the same modes.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Literal, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.ndimage import minimum_filter
from scipy.optimize import least_squares, minimize_scalar

from .errors import PlanningError, ValidationError
from .walk import IDENTITY, CoinSchedule, WalkerCoinState, apply_step, as_operator, is_unitary

__all__ = [
    "hwp_matrix",
    "qwp_matrix",
    "phase_distance",
    "global_phase",
    "WaveplateElement",
    "WaveplatePlan",
    "compose",
    "compile_coin",
    "occupied_modes",
    "plan_placement",
    "MAX_PLATES_PER_MODE",
]

PlateKind = Literal["HWP", "QWP"]

COMPILE_TOL = 1e-9
MAX_PLATES_PER_MODE = 3


def hwp_matrix(theta: float) -> NDArray[np.complex128]:
    """Half-wave plate ``[[cos 2t, sin 2t], [sin 2t, -cos 2t]]``."""
    t = 2 * math.radians(theta)
    c, s = math.cos(t), math.sin(t)
    return np.array([[c, s], [s, -c]], dtype=np.complex128)


def qwp_matrix(theta: float) -> NDArray[np.complex128]:
    """Quarter-wave plate with fast axis at ``theta`` degrees."""
    t = math.radians(theta)
    c, s = math.cos(t), math.sin(t)
    off = (1 - 1j) * s * c
    return np.array([[c * c + 1j * s * s, off], [off, s * s + 1j * c * c]], dtype=np.complex128)


def _hwp_batch(theta: NDArray[np.float64]) -> NDArray[np.complex128]:
    t = 2 * np.radians(theta)
    c, s = np.cos(t), np.sin(t)
    return np.stack([np.stack([c, s], -1), np.stack([s, -c], -1)], -2).astype(np.complex128)


def _qwp_batch(theta: NDArray[np.float64]) -> NDArray[np.complex128]:
    t = np.radians(theta)
    c, s = np.cos(t), np.sin(t)
    off = (1 - 1j) * s * c
    return np.stack([np.stack([c * c + 1j * s * s, off], -1),
                     np.stack([off, s * s + 1j * c * c], -1)], -2)


_MATRIX = {"HWP": hwp_matrix, "QWP": qwp_matrix}
_BATCH = {"HWP": _hwp_batch, "QWP": _qwp_batch}


def global_phase(a: ArrayLike, b: ArrayLike) -> float:
    """Least-squares phase ``g`` with ``a ~ exp(i g) b``."""
    ov = np.vdot(np.asarray(b), np.asarray(a))
    return float(np.angle(ov)) if abs(ov) > 0 else 0.0


def phase_distance(a: ArrayLike, b: ArrayLike) -> float:
    """``min_g max_ij |a_ij - exp(i g) b_ij|``."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)

    def f(g: float) -> float:
        return float(np.abs(a - np.exp(1j * g) * b).max())

    g0 = global_phase(a, b)
    best = f(g0)
    if best > 1e-14:
        res = minimize_scalar(f, bounds=(g0 - 0.5, g0 + 0.5), method="bounded",
                              options={"xatol": 1e-13})
        best = min(best, float(res.fun))
    return best


def _wrap(theta: float, period: float) -> float:
    half = period / 2
    w = (theta + half) % period - half
    # keep the half-open interval closed on the left after rounding
    return -half if math.isclose(w, half) else w


@dataclass(frozen=True)
class WaveplateElement:
    """One plate: kind, angle in degrees, and the modes it covers.

    HWP angles are reduced to ``[-90, 90)`` and QWP angles to ``[-180, 180)``.
    """

    kind: PlateKind
    angle: float
    modes: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in _MATRIX:
            raise ValidationError(f"unknown plate kind {self.kind!r}")
        if not math.isfinite(self.angle):
            raise ValidationError("plate angle must be finite")
        period = 180.0 if self.kind == "HWP" else 360.0
        object.__setattr__(self, "angle", _wrap(float(self.angle), period))
        object.__setattr__(self, "modes", tuple(sorted(int(m) for m in self.modes)))

    @property
    def matrix(self) -> NDArray[np.complex128]:
        return _MATRIX[self.kind](self.angle)

    def at(self, modes: Iterable[int]) -> "WaveplateElement":
        return WaveplateElement(self.kind, self.angle, tuple(modes))


def compose(elements: Sequence[WaveplateElement], offsets: Sequence[float] | None = None) -> NDArray[np.complex128]:
    """Jones matrix of plates traversed in order (first element acts first).

    ``offsets`` adds a per-plate angle error in degrees.
    """
    m = np.eye(2, dtype=np.complex128)
    for k, el in enumerate(elements):
        theta = el.angle + (offsets[k] if offsets is not None else 0.0)
        m = _MATRIX[el.kind](theta) @ m
    return m


# ---------------------------------------------------------------------------
# coin compilation

_SEQUENCES: tuple[tuple[PlateKind, ...], ...] = (
    ("HWP",),
    ("QWP",),
    ("HWP", "QWP"),
    ("QWP", "HWP"),
    ("QWP", "HWP", "QWP"),
)
_GRID_STEP = {1: 1.0, 2: 3.0, 3: 6.0}
_N_SEEDS = 12
_SEED_COST = 0.1


def _grid_costs(kinds: tuple[PlateKind, ...], target: NDArray[np.complex128]):
    """Phase-insensitive mismatch ``1 - |tr(U^dag P)|/2`` over an angle grid."""
    step = _GRID_STEP[len(kinds)]
    axis = np.arange(-90.0, 90.0, step)
    mats = [_BATCH[k](axis) for k in kinds]
    prod = mats[0]
    for k, m in enumerate(mats[1:], start=1):
        # prepend a new angle axis: later plates multiply from the left
        prod = np.einsum("aij,...jk->a...ik", m, prod)
    # axes are ordered (last plate, ..., first plate)
    tr = np.einsum("ij,...ij->...", target.conj(), prod)
    cost = 1.0 - np.abs(tr) / 2
    return axis, cost


def _refine(kinds, target, start_angles):
    n = len(kinds)
    p0 = compose([WaveplateElement(k, a) for k, a in zip(kinds, start_angles)])
    g0 = global_phase(p0, target)

    def resid(v):
        p = np.eye(2, dtype=np.complex128)
        for k, a in zip(kinds, v[:n]):
            p = _MATRIX[k](a) @ p
        d = (p - np.exp(1j * v[n]) * target).ravel()
        return np.concatenate([d.real, d.imag])

    sol = least_squares(resid, np.r_[start_angles, g0], method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15)
    return [float(a) for a in sol.x[:n]]


def _variants(kinds, angles):
    """HWP(t) and HWP(t + 90) differ only by a sign; enumerate both."""
    options = [(a, a + 90.0) if k == "HWP" else (a,) for k, a in zip(kinds, angles)]
    for combo in itertools.product(*options):
        yield [WaveplateElement(k, a) for k, a in zip(kinds, combo)]


def _ls_phase_error(a, b) -> float:
    # upper bound on phase_distance, exact enough to accept a solution
    return float(np.abs(a - np.exp(1j * global_phase(a, b)) * b).max())


def _solutions(kinds, target):
    axis, cost = _grid_costs(kinds, target)
    # periodic local minima of the grid cost seed the refinement
    is_min = (cost == minimum_filter(cost, size=3, mode="wrap")) & (cost < _SEED_COST)
    seeds = np.argwhere(is_min)
    seeds = seeds[np.argsort(cost[is_min])][:_N_SEEDS]
    found = []
    for rev in seeds:
        # grid axes run (last plate, ..., first plate)
        start = [axis[i] for i in reversed(rev)]
        angles = _refine(kinds, target, start)
        for els in _variants(kinds, angles):
            if _ls_phase_error(compose(els), target) <= COMPILE_TOL:
                found.append(els)
    return found


def _rank(els, target):
    g = abs(global_phase(compose(els), target))
    return (len(els), round(g, 9), round(sum(abs(e.angle) for e in els), 9))


def compile_coin(target: ArrayLike) -> list[WaveplateElement]:
    """Shortest plate sequence reproducing ``target`` up to a global phase.

    Sequences are tried in order of length: nothing (identity), a single HWP
    or QWP, HWP+QWP in either order, then QWP-HWP-QWP, which reaches every
    unitary. Among equally short solutions the one equal to ``target`` with
    the smallest global phase wins, then the smallest total ``|angle|``.
    Returned elements carry no mode annotation.
    """
    u = as_operator(target)
    if not is_unitary(u, tol=1e-10):
        raise ValidationError("cannot compile a non-unitary coin")
    if _ls_phase_error(IDENTITY, u) <= COMPILE_TOL:
        return []
    for length in (1, 2, 3):
        found = []
        for kinds in _SEQUENCES:
            if len(kinds) == length:
                found.extend(_solutions(kinds, u))
        if found:
            return min(found, key=lambda els: _rank(els, u))
    raise ValidationError("no wave-plate sequence found")  # pragma: no cover


# ---------------------------------------------------------------------------
# placement


@dataclass(frozen=True)
class WaveplatePlan:
    """Plates per step, each tuple in traversal order."""

    steps: dict[int, tuple[WaveplateElement, ...]] = field(default_factory=dict)

    def plates(self, step: int) -> tuple[WaveplateElement, ...]:
        return self.steps.get(step, ())

    def covering(self, step: int, mode: int) -> list[WaveplateElement]:
        return [p for p in self.plates(step) if mode in p.modes]

    def modes(self, step: int) -> list[int]:
        return sorted({m for p in self.plates(step) for m in p.modes})

    def mode_operator(self, step: int, mode: int, offsets: dict[int, float] | None = None) -> NDArray[np.complex128]:
        """Composite Jones matrix seen by ``mode`` on ``step``.

        ``offsets`` maps the index of a plate within the step to an angle
        error in degrees.
        """
        m = np.eye(2, dtype=np.complex128)
        for k, p in enumerate(self.plates(step)):
            if mode in p.modes:
                dt = offsets.get(k, 0.0) if offsets else 0.0
                m = _MATRIX[p.kind](p.angle + dt) @ m
        return m

    def __len__(self) -> int:
        return sum(len(v) for v in self.steps.values())

    def records(self) -> list[dict]:
        return [
            {"step": n, "modes": list(p.modes), "kind": p.kind, "angle": round(p.angle, 2)}
            for n in sorted(self.steps)
            for p in self.steps[n]
        ]

    def to_csv(self) -> str:
        lines = ["step,modes,kind,angle_deg"]
        for r in self.records():
            modes = ";".join(str(m) for m in r["modes"])
            lines.append(f"{r['step']},{modes},{r['kind']},{r['angle']:.2f}")
        return "\n".join(lines) + "\n"


def occupied_modes(schedule: CoinSchedule, steps: int, start: int = 0) -> dict[int, list[int]]:
    """Modes that can carry light when step ``n`` begins, for ``n = 1..steps``.

    Union of the supports reached from the two coin basis states, hence the
    support for a generic input.
    """
    states = [WalkerCoinState.localized(b, start) for b in ([1, 0], [0, 1])]
    occ = {}
    for n in range(1, steps + 1):
        occ[n] = sorted(set().union(*(s.positions for s in states)))
        states = [apply_step(s, schedule, n) for s in states]
    return occ


def _place_side(modes, coins):
    """Plates for one side of a split, processed from the inner end outward.

    ``modes`` is ordered from the inner end to the edge for ``side == 'top'``
    and likewise (descending) for ``'bottom'``; a plate put in at mode ``y``
    covers ``y`` and everything beyond it towards the edge.
    """
    acc = {m: np.eye(2, dtype=np.complex128) for m in modes}
    plates = []
    for i, y in enumerate(modes):
        want = coins.get(y, IDENTITY)
        fix = want @ acc[y].conj().T
        if _ls_phase_error(fix, IDENTITY) <= COMPILE_TOL:
            continue
        reach = modes[i:]
        for el in compile_coin(fix):
            plates.append(el.at(reach))
            for m in reach:
                acc[m] = el.matrix @ acc[m]
    return plates


def _cost(plates):
    per_mode = {}
    for p in plates:
        for m in p.modes:
            per_mode[m] = per_mode.get(m, 0) + 1
    return len(plates), max(per_mode.values(), default=0), sum(len(p.modes) for p in plates), per_mode


def plan_placement(schedule: CoinSchedule, steps: int | None = None, start: int = 0) -> WaveplatePlan:
    """Place plates realizing ``schedule`` on an ``steps``-step walk.

    The modes present at a step (occupied or scheduled) are split into a
    lower and an upper group; plates for the lower group enter from below and
    those for the upper group from above. Every split is tried and the one
    with the fewest plates wins, then the smallest per-mode stack, then the
    smallest total coverage. Raises :class:`PlanningError` when every split
    needs more than three plates on some mode.
    """
    if steps is None:
        steps = schedule.last_step
    occ = occupied_modes(schedule, steps, start) if steps else {}
    plan = {}
    for n in range(1, steps + 1):
        coins = {x: m for x, m in schedule.at_step(n).items() if _ls_phase_error(m, IDENTITY) > COMPILE_TOL}
        if not coins:
            continue
        modes = sorted(set(occ[n]) | set(coins))
        best = None
        for s in range(len(modes) + 1):
            lower = _place_side(modes[:s][::-1], coins)
            upper = _place_side(modes[s:], coins)
            plates = upper + lower
            total, stack, coverage, _ = _cost(plates)
            if stack > MAX_PLATES_PER_MODE:
                continue
            key = (total, stack, coverage)
            if best is None or key < best[0]:
                best = (key, plates)
        if best is None:
            raise PlanningError(f"step {n}: no placement within {MAX_PLATES_PER_MODE} plates per mode")
        plan[n] = tuple(best[1])
    return WaveplatePlan(plan)
