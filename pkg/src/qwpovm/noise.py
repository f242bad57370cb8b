"""
Monte Carlo model of experimental imperfections.

Three effects are modelled:

* finite interference visibility ``V``: after every displacer the coherence
  between the two polarization components (which arrive from the two
  neighbouring paths) is multiplied by ``V``; this is a coin dephasing
  channel and therefore completely positive and trace preserving;
* wave-plate setting errors: each plate of the placement plan gets one
  Gaussian angle offset per trial;
* shot noise: detected counts per mode are Poisson with mean ``N_c P(x)``.

Dark counts and accidental coincidences are neglected.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from .errors import PlanningError, SamplingError, ValidationError
from .optics import WaveplatePlan, compile_coin, global_phase, plan_placement
from .walk import WalkSpec, evolve, l1_distance, position_distribution

__all__ = [
    "NoiseParams",
    "NoisyState",
    "TrialResult",
    "BudgetSummary",
    "realize_plan",
    "noisy_evolve",
    "sample_counts",
    "classical_fidelity",
    "error_budget",
]


@dataclass(frozen=True)
class NoiseParams:
    visibility: float = 1.0
    jitter_deg: float = 0.0
    counts: float = 1e4
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.visibility <= 1.0:
            raise ValidationError(f"visibility must lie in [0, 1], got {self.visibility}")
        if self.jitter_deg < 0:
            raise ValidationError(f"angle jitter must be >= 0, got {self.jitter_deg}")
        if not self.counts > 0:
            raise ValidationError(f"expected counts must be > 0, got {self.counts}")
        if int(self.seed) != self.seed or self.seed < 0:
            raise ValidationError(f"seed must be a non-negative integer, got {self.seed}")


@dataclass(frozen=True, eq=False)
class NoisyState:
    """Density operator on ``positions (x) coin`` with index ``2 * i + c``."""

    positions: tuple[int, ...]
    rho: NDArray[np.complex128]

    def trace(self) -> float:
        return float(np.trace(self.rho).real)

    def position_distribution(self, cutoff: float = 0.0) -> dict[int, float]:
        diag = np.real(np.diag(self.rho))
        probs = {x: float(diag[2 * i] + diag[2 * i + 1]) for i, x in enumerate(self.positions)}
        return {x: p for x, p in probs.items() if p > cutoff}


@dataclass(frozen=True)
class TrialResult:
    distribution: dict[int, float]
    d: float
    counts: dict[int, int]


@dataclass(frozen=True)
class BudgetSummary:
    d_median: float
    d_p05: float
    d_p95: float
    d_mean: float
    fidelity_mean: float
    trials: tuple[TrialResult, ...] = field(repr=False)

    @property
    def d_values(self) -> list[float]:
        return [t.d for t in self.trials]


def realize_plan(spec: WalkSpec) -> WaveplatePlan:
    """Plates for ``spec``; falls back to one stack per site if placement fails."""
    try:
        return plan_placement(spec.schedule, spec.steps, spec.start)
    except PlanningError:
        steps = {}
        for n in range(1, spec.steps + 1):
            plates = []
            for x, m in spec.schedule.at_step(n).items():
                plates.extend(el.at((x,)) for el in compile_coin(m))
            if plates:
                steps[n] = tuple(plates)
        return WaveplatePlan(steps)


def _step_coins(spec: WalkSpec, plan: WaveplatePlan, n: int, offsets: dict[int, float] | None):
    """Per-mode Jones matrices of step ``n`` with the schedule's phase convention.

    Each mode's plate stack matches the scheduled coin only up to a phase; that
    phase is removed so a zero offset reproduces the schedule exactly.
    """
    coins = {}
    for x in plan.modes(n):
        nominal = plan.mode_operator(n, x)
        target = spec.schedule.coin(n, x)
        actual = plan.mode_operator(n, x, offsets) if offsets else nominal
        coins[x] = np.exp(-1j * global_phase(nominal, target)) * actual
    return coins


def noisy_evolve(spec: WalkSpec, params: NoiseParams, plan: WaveplatePlan | None = None,
                 rng: np.random.Generator | None = None) -> NoisyState:
    """Density-operator evolution with visibility loss and plate angle errors.

    Angle offsets are drawn once per plate from ``N(0, jitter_deg^2)`` using
    ``rng`` (or a generator seeded with ``params.seed``).
    """
    if rng is None:
        rng = np.random.default_rng(params.seed)
    positions = tuple(range(spec.start - spec.steps, spec.start + spec.steps + 1))
    index = {x: i for i, x in enumerate(positions)}
    dim = 2 * len(positions)

    psi0 = np.zeros(dim, dtype=np.complex128)
    psi0[2 * index[spec.start]: 2 * index[spec.start] + 2] = spec.coin
    rho = np.outer(psi0, psi0.conj())

    use_plates = params.jitter_deg > 0
    if use_plates and plan is None:
        plan = realize_plan(spec)
    # coherence between the |0> and |1> halves of the coin is damped by V
    damp = np.where(np.add.outer(np.arange(dim), np.arange(dim)) % 2 == 0, 1.0, params.visibility)

    for n in range(1, spec.steps + 1):
        if use_plates:
            offsets = {k: float(rng.normal(0.0, params.jitter_deg)) for k in range(len(plan.plates(n)))}
            coins = _step_coins(spec, plan, n, offsets)
            for x in spec.schedule.at_step(n):
                coins.setdefault(x, spec.schedule.coin(n, x))
        else:
            coins = spec.schedule.at_step(n)
        u = np.zeros((dim, dim), dtype=np.complex128)
        for x in positions:
            c = coins.get(x)
            i = index[x]
            if x + 1 in index:
                u[2 * index[x + 1], 2 * i: 2 * i + 2] = c[0] if c is not None else (1, 0)
            if x - 1 in index:
                u[2 * index[x - 1] + 1, 2 * i: 2 * i + 2] = c[1] if c is not None else (0, 1)
        rho = u @ rho @ u.conj().T
        if params.visibility < 1.0:
            rho = rho * damp
    rho = (rho + rho.conj().T) / 2
    return NoisyState(positions, rho)


def sample_counts(dist: dict[int, float], params: NoiseParams, reference: dict[int, float] | None = None,
                  rng: np.random.Generator | None = None) -> TrialResult:
    """Poisson-sample detections with mean ``params.counts * P(x)`` per mode.

    The sampled distribution is the counts normalized by their realized total;
    ``d`` is measured against ``reference`` (default ``dist``). An all-zero
    draw is retried once before :class:`SamplingError` is raised.
    """
    if rng is None:
        rng = np.random.default_rng(params.seed)
    xs = sorted(dist)
    means = np.array([max(dist[x], 0.0) * params.counts for x in xs])
    for _ in range(2):
        raw = rng.poisson(means)
        total = int(raw.sum())
        if total > 0:
            break
    else:
        raise SamplingError("no counts registered in two attempts")
    counts = {x: int(c) for x, c in zip(xs, raw)}
    sampled = {x: c / total for x, c in counts.items()}
    ref = dist if reference is None else reference
    return TrialResult(sampled, l1_distance(sampled, ref), counts)


def classical_fidelity(p: dict[int, float], q: dict[int, float]) -> float:
    """Bhattacharyya overlap ``(sum_x sqrt(p(x) q(x)))^2``."""
    return float(sum(np.sqrt(max(p.get(x, 0.0), 0.0) * max(q.get(x, 0.0), 0.0)) for x in set(p) | set(q)) ** 2)


def _trial(spec, params, plan, theory, trial_seed):
    rng = np.random.default_rng(trial_seed)
    state = noisy_evolve(spec, params, plan=plan, rng=rng)
    return sample_counts(state.position_distribution(cutoff=0.0), params, reference=theory, rng=rng)


def error_budget(spec: WalkSpec, params: NoiseParams, trials: int) -> BudgetSummary:
    """Run ``trials`` independent noisy experiments and summarize ``d``.

    Trial ``k`` uses the ``k``-th child of ``SeedSequence(params.seed)``, so
    results depend only on ``(spec, params, trials)``.
    """
    if trials < 1:
        raise ValidationError(f"need at least one trial, got {trials}")
    theory = position_distribution(evolve(spec))
    plan = realize_plan(spec) if params.jitter_deg > 0 else None
    seeds = np.random.SeedSequence(params.seed).spawn(trials)
    results = tuple(_trial(spec, params, plan, theory, s) for s in seeds)
    d = np.array([r.d for r in results])
    fid = np.array([classical_fidelity(r.distribution, theory) for r in results])
    return BudgetSummary(
        d_median=float(np.median(d)),
        d_p05=float(np.percentile(d, 5)),
        d_p95=float(np.percentile(d, 95)),
        d_mean=float(d.mean()),
        fidelity_mean=float(fid.mean()),
        trials=results,
    )
