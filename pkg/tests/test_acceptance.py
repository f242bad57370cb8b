"""End-to-end acceptance checks; each prints one PASS/FAIL line."""

import cmath
import math
import time

import numpy as np

from qwpovm.noise import NoiseParams, error_budget
from qwpovm.optics import WaveplateElement, compile_coin, compose, hwp_matrix, phase_distance, plan_placement
from qwpovm.povm import completeness_residual, outcome_probabilities, povm_from_spec
from qwpovm.protocols import (
    SIC_POSITIONS,
    UsdSpec,
    sic_coins,
    sic_schedule,
    sic_vectors,
    usd_expected,
    usd_schedule,
)
from qwpovm.tomography import SicOutcome, born_probabilities, fidelity_report, reconstruct
from qwpovm.walk import CoinSchedule, WalkSpec, evolve, position_distribution

from .reference import (
    MEASURED_SIC,
    REPORTED_FIDELITY,
    REPORTED_RHO,
    SIC_PLATES,
    USD_FIXED_HWP,
    USD_TABLE,
    random_spinor,
    random_unitary,
)

PHI_TABLE = [row[0] for row in USD_TABLE]
R3 = math.sqrt(3)


def _max_state_error(state, expected):
    """Largest entrywise deviation between a walk state and ``{x: spinor}``."""
    err = 0.0
    for x in set(state.positions) | set(expected):
        got = state.spinor(x) if x in state.positions else np.zeros(2)
        want = np.asarray(expected.get(x, np.zeros(2)), dtype=complex)
        err = max(err, float(np.abs(got - want).max()))
    return err


def test_criterion_01_usd_final_states(acceptance):
    t0 = time.perf_counter()
    worst = 0.0
    for phi in PHI_TABLE:
        r = math.radians(phi)
        # cos(phi) written as sin(90 - phi) so that it vanishes exactly at 90 degrees
        inc = math.sqrt(math.sin(math.radians(90 - phi)))
        con = math.sqrt(2) * math.sin(r / 2)
        expected = {
            "plus": {3: [inc, 0], 1: [con, 0]},
            "minus": {3: [inc, 0], -1: [0, -con]},
        }
        for which, want in expected.items():
            worst = max(worst, _max_state_error(evolve(usd_schedule(phi, which)), want))
    elapsed = time.perf_counter() - t0
    acceptance(1, "USD three-step final states", worst < 1e-10 and elapsed < 1.0,
               f"max error {worst:.1e}, {elapsed:.3f} s")


def _phase_aligned_error(state, expected):
    ref = max(expected, key=lambda x: abs(expected[x][0]))
    g = state.spinor(ref)[0] / expected[ref][0] if ref in state.positions else 1.0
    g = g / abs(g)
    aligned = {x: np.asarray(v, dtype=complex) * g for x, v in expected.items()}
    return _max_state_error(state, aligned)


def test_criterion_02_sic_final_states(acceptance):
    t0 = time.perf_counter()
    e = cmath.exp
    pi = math.pi
    expected = {
        1: {4: [-1 / R3, 0], 2: [-1j / R3, 0], 0: [1j / R3, 0]},
        2: {6: [1 / R3, 0], 2: [-e(-1j * pi / 3) / R3, 0], 0: [-e(1j * pi / 3) / R3, 0]},
        3: {6: [1 / R3, 0], 4: [-e(-1j * pi / 6) / R3, 0], 2: [-1 / R3, 0]},
        4: {6: [1 / R3, 0], 4: [-e(1j * pi / 6) / R3, 0], 0: [-1 / R3, 0]},
    }
    worst, forbidden = 0.0, 0.0
    for i, want in expected.items():
        final = evolve(sic_schedule(i))
        worst = max(worst, _phase_aligned_error(final, want))
        forbidden = max(forbidden, position_distribution(final).get(SIC_POSITIONS[i], 0.0))
    elapsed = time.perf_counter() - t0
    acceptance(2, "SIC six-step final states", worst < 1e-10 and forbidden < 1e-20 and elapsed < 1.0,
               f"max error {worst:.1e}, forbidden {forbidden:.1e}, {elapsed:.3f} s")


def test_criterion_03_idp_bound(acceptance):
    worst_cos, worst_overlap = 0.0, 0.0
    for phi in range(1, 91):
        eta = usd_expected(UsdSpec(float(phi))).eta_err
        half = math.radians(phi) / 2
        plus = np.array([math.cos(half), math.sin(half)])
        minus = np.array([math.cos(half), -math.sin(half)])
        worst_cos = max(worst_cos, abs(eta - math.cos(math.radians(phi))))
        worst_overlap = max(worst_overlap, abs(eta - abs(plus @ minus)))
    endpoint = usd_expected(UsdSpec(90.0)).eta_err
    ok = worst_cos < 1e-12 and worst_overlap < 1e-12 and endpoint == 0.0
    acceptance(3, "inconclusive rate equals the overlap bound", ok,
               f"vs cos {worst_cos:.1e}, vs overlap {worst_overlap:.1e}, eta(90) = {endpoint!r}")


def test_criterion_04_povm_identity(acceptance):
    completeness = max(completeness_residual(povm_from_spec(s)) for s in
                       [usd_schedule(p) for p in PHI_TABLE] + [sic_schedule(1)])
    elements = {e.position: e.matrix for e in povm_from_spec(sic_schedule(1))}
    xi = sic_vectors()
    element_err = max(float(np.abs(elements[SIC_POSITIONS[i]] - np.outer(xi[i], xi[i].conj()) / 2).max())
                      for i in xi)
    overlap_err = 0.0
    for i in xi:
        for j in xi:
            if i < j:
                a, b = elements[SIC_POSITIONS[i]], elements[SIC_POSITIONS[j]]
                ratio = np.trace(a @ b).real / (np.trace(a).real * np.trace(b).real)
                overlap_err = max(overlap_err, abs(ratio - 1 / 3))
    ok = completeness < 1e-10 and element_err < 1e-10 and overlap_err < 1e-8
    acceptance(4, "POVM completeness and SIC elements", ok,
               f"completeness {completeness:.1e}, elements {element_err:.1e}, overlaps {overlap_err:.1e}")


def test_criterion_05_waveplate_tables(acceptance):
    t0 = time.perf_counter()
    compose_err, angle_err = 0.0, 0.0
    for phi, theta, _, _ in USD_TABLE:
        sched = usd_schedule(phi).schedule
        targets = {(2, 1): [("HWP", theta)]}
        targets.update({k: [("HWP", a)] for k, a in USD_FIXED_HWP.items()})
        for (n, x), plates in targets.items():
            coin = sched.coin(n, x)
            compose_err = max(compose_err, phase_distance(compose([WaveplateElement(k, a) for k, a in plates]), coin))
            compiled = compile_coin(coin)
            angle_err = max(angle_err, max(abs(c.angle - a) for c, (_, a) in zip(compiled, plates)))
            if [c.kind for c in compiled] != [k for k, _ in plates]:
                angle_err = math.inf
    sic = sic_coins()
    for (n, x), plates in SIC_PLATES.items():
        coin = sic.coin(n, x)
        compose_err = max(compose_err, phase_distance(compose([WaveplateElement(k, a) for k, a in plates]), coin))
        compiled = compile_coin(coin)
        if [c.kind for c in compiled] != [k for k, _ in plates]:
            angle_err = math.inf
        else:
            angle_err = max(angle_err, max(abs(c.angle - a) for c, (_, a) in zip(compiled, plates)))
    # the dual-mode plate arrangement at step four composes back to the coins as well
    plan = plan_placement(sic, 6)
    plan_err = max(phase_distance(plan.mode_operator(4, m), sic.coin(4, m)) for m in (-1, 1, 3))
    plan_err = max(plan_err, phase_distance(plan.mode_operator(4, 1), hwp_matrix(17.63)))
    elapsed = time.perf_counter() - t0
    ok = compose_err < 2e-4 and angle_err < 0.02 and plan_err < 2e-4 and elapsed < 1.0
    acceptance(5, "wave-plate table audit", ok,
               f"compose {compose_err:.1e}, regenerated angle {angle_err:.1e} deg, plan {plan_err:.1e}, "
               f"{elapsed:.3f} s")


def test_criterion_06_tomography(acceptance):
    t0 = time.perf_counter()
    rows = [SicOutcome.from_positions(MEASURED_SIC[i]) for i in (1, 2, 3, 4)]
    rho_err = max(float(np.abs(reconstruct(row) - REPORTED_RHO[i]).max()) for i, row in enumerate(rows, 1))
    fids = fidelity_report(rows)
    fid_err = max(abs(f - r) for f, r in zip(fids, REPORTED_FIDELITY))
    elapsed = time.perf_counter() - t0
    ok = rho_err < 5e-3 and fid_err < 5e-3 and elapsed < 1.0
    acceptance(6, "tomography of the measured distributions", ok,
               f"density {rho_err:.1e}, fidelity {fid_err:.1e} "
               f"[{', '.join(f'{f:.4f}' for f in fids)}], {elapsed:.3f} s")


def test_criterion_07_superposition_ratio(acceptance):
    predicted = math.tan(math.radians(22.5)) ** 2 / 2
    out = usd_expected(UsdSpec(45, "superposition", 1, 1))
    engine = position_distribution(evolve(usd_schedule(45, "superposition", 1, 1)))
    pred_err = max(abs(out.p_plus - predicted), abs(out.p_minus - predicted),
                   abs(engine[1] - predicted), abs(engine[-1] - predicted))
    measured = [(0.0854, 0.0015), (0.0850, 0.0015)]
    within = all(abs(m - predicted) <= 3 * s for m, s in measured)
    rng = np.random.default_rng(7)
    ratio_err = 0.0
    for _ in range(500):
        a, b = rng.normal(size=2)
        phi = float(rng.uniform(1, 90))
        d = position_distribution(evolve(usd_schedule(phi, "superposition", a, b)))
        ratio_err = max(ratio_err, abs(d[1] / d[-1] / (a * a / (b * b)) - 1))
    ok = pred_err < 1e-12 and within and ratio_err < 1e-12
    acceptance(7, "superposition input ratio", ok,
               f"P(+-1) = {predicted:.5f}, measured within 3 sigma: {within}, ratio law {ratio_err:.1e}")


def test_criterion_08_noise_consistency(acceptance):
    t0 = time.perf_counter()
    lab = NoiseParams(visibility=0.992, jitter_deg=0.3, counts=1e4, seed=2024)
    usd = [error_budget(usd_schedule(p, w), lab, 200).d_median for p in PHI_TABLE for w in ("plus", "minus")]
    sic = [error_budget(sic_schedule(i), lab, 200).d_median for i in (1, 2, 3, 4)]
    ideal = NoiseParams(visibility=1.0, jitter_deg=0.0, counts=1e8, seed=2025)
    clean = max(max(error_budget(s, ideal, 50).d_values) for s in (usd_schedule(45), sic_schedule(2)))
    elapsed = time.perf_counter() - t0
    ok = max(usd) < 0.05 and max(sic) < 0.08 and clean < 1e-3 and elapsed < 120
    acceptance(8, "noise model consistency", ok,
               f"USD median d <= {max(usd):.4f}, SIC median d <= {max(sic):.4f}, "
               f"noiseless d <= {clean:.1e}, {elapsed:.1f} s")


def test_criterion_09_oracle_equivalence(acceptance):
    rng = np.random.default_rng(99)
    worst = 0.0
    for _ in range(100):
        steps = int(rng.integers(1, 7))
        coins = {(n, x): random_unitary(rng) for n in range(1, steps + 1) for x in range(-n + 1, n, 2)
                 if rng.random() < 0.8}
        spec = WalkSpec(steps, [1, 0], CoinSchedule(coins))
        elements = povm_from_spec(spec)
        for _ in range(10):
            psi = random_spinor(rng)
            engine = position_distribution(evolve(spec.with_coin(psi)))
            povm = outcome_probabilities(elements, psi)
            worst = max(worst, max(abs(engine.get(x, 0) - povm.get(x, 0)) for x in set(engine) | set(povm)))
    acceptance(9, "engine agrees with extracted POVM", worst < 1e-10, f"max deviation {worst:.1e}")


def test_criterion_10_inversion_round_trip(acceptance):
    rng = np.random.default_rng(1000)
    sx = np.array([[0, 1], [1, 0]])
    sy = np.array([[0, -1j], [1j, 0]])
    sz = np.diag([1, -1])
    worst = 0.0
    for _ in range(1000):
        v = rng.normal(size=3)
        r = rng.random() ** (1 / 3) * v / np.linalg.norm(v)
        rho = (np.eye(2) + r[0] * sx + r[1] * sy + r[2] * sz) / 2
        worst = max(worst, float(np.abs(reconstruct(born_probabilities(rho)) - rho).max()))
    acceptance(10, "SIC inversion round trip", worst < 1e-10, f"max error {worst:.1e} over 1000 states")
