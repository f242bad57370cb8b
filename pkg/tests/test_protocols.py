import math

import numpy as np
import pytest

from qwpovm.errors import DomainError, ValidationError
from qwpovm.protocols import (
    LAMBDA,
    UsdSpec,
    sic_expected,
    sic_inputs,
    sic_schedule,
    sic_vectors,
    usd_coin,
    usd_expected,
    usd_overlap,
    usd_schedule,
)
from qwpovm.walk import SIGMA_X, evolve, is_unitary, position_distribution

from .oracles import dense_distribution

GRID = np.arange(1, 91)


def test_usd_coin_at_90_is_sigma_x():
    assert np.abs(usd_coin(90) - SIGMA_X).max() < 1e-15


@pytest.mark.parametrize("phi", [0, -10, 90.5, 120])
def test_usd_domain(phi):
    with pytest.raises(DomainError):
        usd_schedule(phi)


def test_usd_schedule_layout():
    spec = usd_schedule(45)
    assert spec.steps == 3
    assert sorted(k for k, _ in spec.schedule.items()) == [(2, -1), (2, 1), (3, 0)]
    assert all(is_unitary(m, 1e-12) for _, m in spec.schedule.items())


def test_usd_expected_examples():
    out = usd_expected(UsdSpec(90, "plus"))
    assert (out.p_plus, out.p_minus, out.p_inconclusive) == (1.0, 0.0, 0.0)
    out = usd_expected(UsdSpec(45, "plus"))
    assert out.eta_err == pytest.approx(math.cos(math.radians(45)), abs=1e-15)
    # measured 0.7139 +- 0.0030
    assert abs(out.eta_err - 0.7139) < 3 * 0.0030


def test_usd_45_distribution_from_engine():
    d = position_distribution(evolve(usd_schedule(45)))
    assert d[3] == pytest.approx(0.7071067811865475, abs=1e-12)
    assert d[1] == pytest.approx(0.29289321881345237, abs=1e-12)
    assert -1 not in d


def test_equal_superposition_at_45():
    expected = math.tan(math.radians(22.5)) ** 2 / 2
    out = usd_expected(UsdSpec(45, "superposition", 1, 1))
    assert out.p_plus == pytest.approx(expected, abs=1e-14)
    assert out.p_minus == pytest.approx(expected, abs=1e-14)
    # frozen from tests.oracles.dense_distribution on the normalized |H> input
    assert expected == pytest.approx(0.08578643762690492, abs=1e-15)
    spec = usd_schedule(45, "superposition", 1, 1)
    assert np.allclose(spec.coin, [1, 0])


def test_ratio_law_random(rng):
    for _ in range(200):
        phi = float(rng.uniform(1, 90))
        a, b = rng.normal(size=2)
        out = usd_expected(UsdSpec(phi, "superposition", a, b))
        d = position_distribution(evolve(usd_schedule(phi, "superposition", a, b)))
        assert d.get(1, 0) / d.get(-1, 0) == pytest.approx(a * a / (b * b), rel=1e-12)
        assert out.ratio == pytest.approx(a * a / (b * b), rel=1e-12)
        for x, p in out.as_distribution().items():
            assert d.get(x, 0) == pytest.approx(p, abs=1e-12)


def test_ratio_sentinel():
    assert usd_expected(UsdSpec(45, "superposition", 1, 0)).ratio == math.inf
    with pytest.raises(ValidationError):
        UsdSpec(45, "superposition", 0, 0)


def test_eta_equals_overlap_on_grid():
    for phi in GRID:
        eta = usd_expected(UsdSpec(float(phi))).eta_err
        assert eta == pytest.approx(math.cos(math.radians(phi)), abs=1e-12)
        assert eta == pytest.approx(usd_overlap(float(phi)), abs=1e-12)


def test_eta_monotone():
    etas = [usd_expected(UsdSpec(float(p))).eta_err for p in GRID]
    assert all(a > b for a, b in zip(etas, etas[1:]))


def test_zero_cross_talk():
    for phi in GRID:
        plus = position_distribution(evolve(usd_schedule(float(phi), "plus")))
        minus = position_distribution(evolve(usd_schedule(float(phi), "minus")))
        assert plus.get(-1, 0.0) == 0.0
        assert minus.get(1, 0.0) == 0.0


def test_sic_vector_completeness_and_orthogonality():
    xi, psi = sic_vectors(), sic_inputs()
    total = sum(np.outer(v, v.conj()) for v in xi.values()) / 2
    assert np.abs(total - np.eye(2)).max() < 1e-12
    for i in xi:
        assert abs(np.vdot(xi[i], psi[i])) < 1e-12
        for j in xi:
            if i != j:
                assert abs(np.vdot(xi[i], xi[j])) ** 2 == pytest.approx(1 / 3, abs=1e-12)
    assert LAMBDA == pytest.approx(complex(-0.5, math.sqrt(3) / 2))


def test_sic_schedule_inputs():
    assert np.allclose(sic_schedule(1).coin, [0, 1])
    assert np.allclose(sic_schedule(2).coin, np.array([math.sqrt(2), -1]) / math.sqrt(3))
    spec = sic_schedule(1)
    assert spec.steps == 6
    assert all(is_unitary(m, 1e-12) for _, m in spec.schedule.items())
    with pytest.raises(ValidationError):
        sic_schedule(5)


def test_sic_expected_examples():
    assert sic_expected(1) == pytest.approx({0: 1 / 3, 2: 1 / 3, 4: 1 / 3})
    assert sic_expected(3) == pytest.approx({2: 1 / 3, 4: 1 / 3, 6: 1 / 3})


@pytest.mark.parametrize("i", [1, 2, 3, 4])
def test_sic_expected_matches_engine_and_oracle(i):
    spec = sic_schedule(i)
    engine = position_distribution(evolve(spec))
    dense = dense_distribution(spec.schedule, spec.steps, spec.coin)
    expected = sic_expected(i)
    for x in set(engine) | set(expected):
        assert engine.get(x, 0) == pytest.approx(expected.get(x, 0), abs=1e-12)
        assert dense.get(x, 0) == pytest.approx(expected.get(x, 0), abs=1e-12)
