"""Path simulation: engines, streams, layout, worker invariance."""

import numpy as np
import pytest

from kendall_walks import (
    Dirac,
    Kendall,
    ParameterError,
    Pareto,
    ResourceError,
    RngStream,
    SupportError,
    SymPareto,
    Uniform01,
    WalkConfig,
    increment_cdf,
    increment_joint_prob,
    kendall_kernel_sample,
    ks_statistic,
    ks_two_sample,
    nstep_delta1_cdf,
    simulate,
    simulate_associated,
    step_kendall,
    step_weak_kendall,
    subsample,
    symmetrized_atom,
    worker_count,
)
from kendall_walks.verify import KS_COEFF
from kendall_walks.walks import _path_uniform_block


def _band(n):
    return 3.0 * KS_COEFF / np.sqrt(n)


def _replay_kendall(cfg):
    states = np.zeros((cfg.paths, cfg.horizon + 1))
    steps = np.zeros((cfg.paths, cfg.horizon))
    thetas = np.zeros((cfg.paths, cfg.horizon - 1))
    switches = np.zeros((cfg.paths, cfg.horizon - 1), dtype=bool)
    for m in range(cfg.paths):
        rng = RngStream(cfg.seed, m)
        x = float(cfg.unit_step.sample(rng))
        steps[m, 0] = x
        states[m, 1] = x
        for i in range(1, cfg.horizon):
            dx = float(cfg.unit_step.sample(rng))
            x, mult, q = step_kendall(x, dx, cfg.alpha, rng)
            steps[m, i] = dx
            states[m, i + 1] = x
            thetas[m, i - 1] = mult
            switches[m, i - 1] = q
    return states, steps, thetas, switches


def test_path_uniform_block_matches_streams():
    # the vectorized engine consumes exactly the per-path stream uniforms
    for m in (0, 1, 5, 63):
        row = _path_uniform_block(17, m, m + 1, 16)[0]
        want = RngStream(17, m).generator.random(16)
        assert np.array_equal(row, want)
    block = _path_uniform_block(17, 0, 64, 16)
    assert np.array_equal(block[5], RngStream(17, 5).generator.random(16))


def test_vectorized_engine_matches_scalar_replay():
    # identical uniforms through both engines; values agree to rounding
    # noise because array and scalar pow kernels differ in the last ulp
    cfg = WalkConfig("kendall", 1.0, Pareto(2.0), 6, 64, 17)
    ens = simulate(cfg)
    states, steps, thetas, switches = _replay_kendall(cfg)
    assert np.allclose(ens.states, states, rtol=5e-16, atol=0.0)
    assert np.allclose(ens.steps, steps, rtol=5e-16, atol=0.0)
    assert np.allclose(ens.thetas, thetas, rtol=5e-16, atol=0.0)
    assert np.array_equal(ens.switches, switches)


def test_weak_engine_matches_scalar_replay():
    cfg = WalkConfig("weak_kendall", 0.7, Pareto(2.0), 5, 48, 18)
    ens = simulate(cfg)
    for m in (0, 7, 31):
        rng = RngStream(cfg.seed, m)
        x = float(cfg.unit_step.sample(rng))
        assert np.isclose(ens.states[m, 1], x, rtol=5e-16, atol=0.0)
        x = ens.states[m, 1]
        for i in range(1, cfg.horizon):
            dx = float(cfg.unit_step.sample(rng))
            got, mult, q = step_weak_kendall(x, dx, cfg.alpha, rng)
            assert np.isclose(ens.steps[m, i], dx, rtol=5e-16, atol=0.0)
            assert np.isclose(ens.states[m, i + 1], got, rtol=5e-15, atol=1e-300)
            assert np.isclose(ens.thetas[m, i - 1], mult, rtol=5e-15, atol=0.0)
            assert ens.switches[m, i - 1] == bool(q)
            x = ens.states[m, i + 1]


def test_simulate_deterministic_in_seed():
    cfg = WalkConfig("kendall", 1.0, Uniform01(), 5, 300, 21)
    a = simulate(cfg)
    b = simulate(cfg)
    assert np.array_equal(a.states, b.states)
    c = simulate(WalkConfig("kendall", 1.0, Uniform01(), 5, 300, 22))
    assert not np.array_equal(a.states, c.states)


def test_worker_count_does_not_change_results(monkeypatch):
    cfg = WalkConfig("kendall", 1.0, Dirac(1.0), 4, 40000, 23)
    monkeypatch.setenv("KENDALL_WALKS_THREADS", "1")
    a = simulate(cfg)
    monkeypatch.setenv("KENDALL_WALKS_THREADS", "4")
    b = simulate(cfg)
    assert np.array_equal(a.states, b.states)
    assert np.array_equal(a.thetas, b.thetas)
    assert np.array_equal(a.switches, b.switches)


def test_path_view_and_reconstruction():
    cfg = WalkConfig("kendall", 0.5, Pareto(2.0), 6, 200, 29)
    ens = simulate(cfg)
    assert np.all(ens.states[:, 0] == 0.0)
    assert np.array_equal(ens.states[:, 1], ens.steps[:, 0])
    for m in (0, 5, 199):
        p = ens[m]
        assert np.array_equal(p.states, ens.states[m])
        for i in range(cfg.horizon - 1):
            carrier = max(p.states[i + 1], p.steps[i + 1])
            assert p.states[i + 2] == carrier * p.thetas[i]
    # theta is 1 exactly when the switch stayed off
    off = ~ens.switches
    assert np.all(ens.thetas[off] == 1.0)
    assert np.all(ens.thetas[ens.switches] > 1.0)


def test_unit_step_switch_is_certain_and_tail_is_pareto():
    # equal unit atoms give z = 1, so the first transition always switches
    cfg = WalkConfig("kendall", 1.0, Dirac(1.0), 2, 50000, 31)
    ens = simulate(cfg)
    assert np.all(ens.switches[:, 0])
    assert ks_statistic(ens.thetas[:, 0], Pareto(2.0).cdf) <= _band(cfg.paths)


def test_semigroup_two_sample():
    n = 100000
    four = simulate(WalkConfig("kendall", 1.0, Dirac(1.0), 4, n, 37)).states[:, 4]
    a = simulate(WalkConfig("kendall", 1.0, Dirac(1.0), 2, n, 38)).states[:, 2]
    b = simulate(WalkConfig("kendall", 1.0, Dirac(1.0), 2, n, 39)).states[:, 2]
    glued = kendall_kernel_sample(1.0, a, b, RngStream(40, 0).generator)
    assert ks_two_sample(four, glued) <= 3 * KS_COEFF * np.sqrt(2.0 / n)


def test_increments_are_dependent():
    # joint law of (X_2, X_3 - X_2) differs from the product of marginals
    n = 200000
    ens = simulate(WalkConfig("kendall", 1.0, Dirac(1.0), 3, n, 41))
    x2 = ens.states[:, 2]
    inc = ens.states[:, 3] - x2
    a = x2 <= 2.0
    b = inc <= 1.0
    joint = np.mean(a & b)
    want_joint = increment_joint_prob(2, 1.0, 2.0)
    assert abs(joint - want_joint) < 4 * np.sqrt(want_joint * (1 - want_joint) / n)
    cov = joint - np.mean(a) * np.mean(b)
    want_cov = want_joint - nstep_delta1_cdf(2, 1.0, 2.0) * increment_cdf(2, 1.0)
    se = np.sqrt(np.mean(a) * np.mean(b) / n)
    assert abs(cov) > 5 * se
    assert np.sign(cov) == np.sign(want_cov)


def test_subsample_views_and_validation():
    cfg = WalkConfig("kendall", 1.0, Uniform01(), 6, 50, 43)
    ens = simulate(cfg)
    sub = subsample(ens, 2)
    assert sub.stride == 2
    assert np.array_equal(sub.states, ens.states[:, ::2])
    assert np.array_equal(subsample(ens, 1).states, ens.states)
    with pytest.raises(ParameterError):
        subsample(ens, 0)
    with pytest.raises(ParameterError):
        subsample(ens, 7)


def test_simulate_associated_partial_sums():
    cfg = WalkConfig("weak_kendall", 0.5, symmetrized_atom(1.0), 5, 20000, 47)
    out = simulate_associated(cfg)
    assert out.partial_sums.shape == (cfg.paths, cfg.horizon + 1)
    assert np.all(out.partial_sums[:, 0] == 0.0)
    want = np.cumsum(out.steps * out.multipliers, axis=1)
    assert np.max(np.abs(out.partial_sums[:, 1:] - want)) == 0.0
    assert set(np.unique(out.steps)) == {-1.0, 1.0}


def test_simulate_associated_single_step_chf():
    cfg = WalkConfig("weak_kendall", 1.0, symmetrized_atom(1.0), 2, 50000, 53)
    out = simulate_associated(cfg)
    s1 = out.partial_sums[:, 1]
    for t in (0.25, 0.6):
        est = np.mean(np.cos(t * s1))
        se = np.std(np.cos(t * s1)) / np.sqrt(cfg.paths)
        assert abs(est - (1 - t)) < 5 * se + 1e-4


def test_simulate_associated_requires_weak_kind():
    cfg = WalkConfig("kendall", 1.0, Dirac(1.0), 3, 10, 57)
    with pytest.raises(ParameterError):
        simulate_associated(cfg)


def test_config_validation():
    with pytest.raises(ParameterError):
        WalkConfig("kendall", 1.0, Dirac(1.0), 0, 10, 0)
    with pytest.raises(ParameterError):
        WalkConfig("kendall", 1.0, Dirac(1.0), 3, 0, 0)
    with pytest.raises(ParameterError):
        WalkConfig("weak_kendall", 1.5, symmetrized_atom(1.0), 3, 10, 0)
    with pytest.raises(SupportError):
        WalkConfig("kendall", 1.0, SymPareto(2.0), 3, 10, 0)
    with pytest.raises(ParameterError):
        WalkConfig("planar", 1.0, Dirac(1.0), 3, 10, 0)


def test_memory_guard():
    with pytest.raises(ResourceError):
        simulate(WalkConfig("kendall", 1.0, Dirac(1.0), 1000, 10**9, 0))


def test_worker_count_env(monkeypatch):
    monkeypatch.setenv("KENDALL_WALKS_THREADS", "7")
    assert worker_count() == 7
    monkeypatch.setenv("KENDALL_WALKS_THREADS", "0")
    with pytest.raises(ParameterError):
        worker_count()
    monkeypatch.setenv("KENDALL_WALKS_THREADS", "many")
    with pytest.raises(ParameterError):
        worker_count()
    monkeypatch.delenv("KENDALL_WALKS_THREADS")
    assert worker_count() >= 1


def test_scalar_step_ops_validate():
    rng = RngStream(0, 0)
    with pytest.raises(SupportError):
        step_kendall(-1.0, 1.0, 1.0, rng)
    with pytest.raises(ParameterError):
        step_kendall(1.0, 1.0, 0.0, rng)
    nxt, mult, q = step_kendall(1.0, 2.0, 1.0, rng)
    assert nxt == 2.0 * mult if q else nxt == 2.0
    nxt, mult, q = step_weak_kendall(-1.0, 0.5, 1.0, rng)
    assert np.isfinite(nxt)
