import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from snirkit import DirectedGraph, fit, gen_sbm, screen_candidates
from snirkit.errors import InvalidConfigError, UnstableTruthError
from snirkit.simlab import (
    TruthPlan,
    TruthSpec,
    draw_coefficients,
    draw_truth,
    gen_snir_data,
    metrics,
    pick_truth,
    preset,
    rep_rng,
    run_setting_study,
    run_study,
    snr_sweep,
    spectral_radius,
    surrogate_responses,
)


def test_truth_spec_validation():
    with pytest.raises(InvalidConfigError):
        TruthSpec([1, 2], [0.5])
    with pytest.raises(InvalidConfigError):
        TruthSpec([1, 1], [0.5, 0.5])
    assert TruthSpec([2], [0.3]).rho_full(4).tolist() == [0, 0, 0.3, 0]


def test_gen_data_satisfies_model_exactly():
    g = gen_sbm(300, seed=1)
    s1 = np.argsort(-g.in_degree, kind="stable")[:5]
    truth = TruthSpec(s1, np.array([0.6, -0.5, 0.7, 0.5, -0.8]), mu=5.0, sigma=0.7)
    rng = np.random.default_rng(3)
    y = gen_snir_data(g, truth, rng)
    eps = np.random.default_rng(3).standard_normal(g.n) * 0.7
    a = g.to_dense()
    mu = np.zeros(g.n)
    mu[s1] = 5.0
    np.testing.assert_allclose(y, mu + a @ (truth.rho_full(g.n) * y) + eps, atol=1e-10)


def test_gen_data_unstable():
    g = DirectedGraph.from_edges(4, [(0, 1), (1, 0)])
    with pytest.raises(UnstableTruthError):
        gen_snir_data(g, TruthSpec([0, 1], [1.0, 1.0]), seed=0)
    assert spectral_radius(g, [0, 1], [0.5, 0.5]) == pytest.approx(0.5)


def test_gen_data_holds_given_responses():
    g = gen_sbm(200, seed=2)
    s = np.array([3, 7])
    y = gen_snir_data(g, TruthSpec(s, [0.5, 0.5], y_s1=np.array([9.0, 8.0])), seed=1)
    assert y[3] == 9.0 and y[7] == 8.0


def test_pick_truth_modes():
    g = gen_sbm(400, seed=3)
    m = screen_candidates(g)
    s = pick_truth(g, "random_m", 10, seed=1)
    assert set(s) <= set(m) and s.size == 10
    assert pick_truth(g, "top_indegree", 3).tolist() == sorted(
        np.lexsort((np.arange(g.n), -g.in_degree))[:3].tolist())
    y = np.arange(g.n, dtype=float)
    assert pick_truth(g, "top_response", 2, y_real=y).tolist() == [g.n - 2, g.n - 1]
    with pytest.raises(InvalidConfigError):
        pick_truth(g, "top_response", 2)
    with pytest.raises(InvalidConfigError):
        pick_truth(g, "bogus", 2)


def test_coefficient_schemes():
    rng = np.random.default_rng(0)
    u = draw_coefficients(1000, rng)
    assert u.min() >= 0.5 and u.max() <= 1.0
    mx = draw_coefficients(8, rng, "mixed")
    assert (mx > 0).sum() == 2 and np.all((mx[mx > 0] >= 0.25) & (mx[mx > 0] <= 0.5))
    assert np.all((mx[mx < 0] >= -1) & (mx[mx < 0] <= -0.5))


def test_metrics_values():
    m = metrics([1, 2, 3], [2, 3, 9], [0.5, 0.5, 0.5], [0.4, 0.5, 0.1], 20)
    assert m.tpr == pytest.approx(2 / 3)
    assert m.fpr == pytest.approx(1 / 17)
    assert m.cfp == 0
    assert m.err == pytest.approx(np.sqrt(0.25 + 0.01 + 0.01))
    assert metrics([1], [1], [0.5], [0.5], 5).cfp == 1


@given(st.sets(st.integers(0, 30), max_size=8), st.sets(st.integers(0, 30), max_size=8))
def test_metrics_bounds(a, b):
    a, b = sorted(a), sorted(b)
    m = metrics(a, b, np.ones(len(a)), np.ones(len(b)), 40)
    assert 0 <= m.tpr <= 1 and 0 <= m.fpr <= 1 and m.cfp in (0, 1) and m.err >= 0
    assert (m.cfp == 1) == (a == b)


def test_rep_rng_independent_and_reproducible():
    assert rep_rng(1, 2).integers(1 << 30) == rep_rng(1, 2).integers(1 << 30)
    assert rep_rng(1, 2).integers(1 << 30) != rep_rng(1, 3).integers(1 << 30)


def test_run_study_reproducible_and_worker_invariant():
    spec = preset("sbm", 400)
    plan = TruthPlan(size=4)
    a = run_study(spec, plan, reps=3, seed=5)
    b = run_study(spec, plan, reps=3, seed=5, workers=2)
    assert a.metrics == b.metrics
    assert a.row()["N"] == 400 and set(a.row()) >= {"TPR", "FPR", "CFP", "Err"}
    with pytest.raises(InvalidConfigError):
        run_study(spec, plan, reps=0)


def test_draw_truth_is_stable():
    g = gen_sbm(500, seed=4)
    rng = np.random.default_rng(1)
    for _ in range(5):
        t = draw_truth(g, TruthPlan(size=10), rng)
        assert spectral_radius(g, t.s1, t.rho) < 1


def test_hetero_covariate_study_runs():
    plan = TruthPlan(size=3, hetero=(0.5, 1.5), covariates=3)
    res = run_study(preset("sbm", 400), plan, reps=2, seed=0)
    assert 0 <= res.metrics.tpr <= 1


def test_setting_study_small():
    g = gen_sbm(600, seed=8)
    y = surrogate_responses(g, seed=1)
    res = run_setting_study(g, y, 2, reps=3, seed=0, size=4)
    assert res.methods["indegree"].tpr == 1.0
    with pytest.raises(InvalidConfigError):
        run_setting_study(g, y, 4, reps=1)


def test_snr_sweep_small():
    g = gen_sbm(600, seed=8)
    y = surrogate_responses(g, seed=1)
    base = fit(g, y)
    res = snr_sweep(g, y, base, coef_grid=[0.05, 0.6], reps=4, seed=0, sigma=0.5)
    assert res.detection.shape == (2,)
    assert res.detection[1] >= res.detection[0]
