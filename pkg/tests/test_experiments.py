"""Experiment drivers: configuration validation, verdict logic, reproducibility."""

import numpy as np
import pytest

from widthlab import (ConfigError, EXPERIMENT_KINDS, EventAResult,
                      ExperimentConfig, run_experiment)


def test_config_validation():
    with pytest.raises(ConfigError):
        ExperimentConfig(kind="nope")
    with pytest.raises(ConfigError):
        ExperimentConfig(kind="dvoretzky", n=100, eps=0.7)
    with pytest.raises(ConfigError):
        ExperimentConfig(kind="jl", n=100, N=200, trials=0)
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"kind": "jl", "n": 100, "N": 200,
                                    "mystery_knob": 3})
    with pytest.raises(ConfigError):
        ExperimentConfig(kind="jl", n=100, N=200, law="levy")
    cfg = ExperimentConfig.from_dict({"kind": "jl", "n": 100, "N": 200,
                                      "trials": 10, "master_seed": 1})
    assert cfg.id == "jl" and cfg.mc_samples == 2000


def test_missing_required_fields():
    with pytest.raises(ConfigError):
        run_experiment(ExperimentConfig(kind="jl", n=100))  # no N


def test_event_a_thresholds():
    ev = EventAResult.evaluate(cond1=2.0, cond2=0.5, u=5.0, delta=0.1)
    assert ev.in_event
    assert not EventAResult.evaluate(6.0, 0.5, 5.0, 0.1).in_event
    assert not EventAResult.evaluate(2.0, 0.05, 5.0, 0.1).in_event


def test_jl_deterministic_rows():
    cfg = ExperimentConfig(kind="jl", n=40, N=80, trials=4, h_count=8, master_seed=5)
    a = run_experiment(cfg)
    b = run_experiment(cfg)
    assert a.rows == b.rows
    assert a.verdict == "PASS"
    assert {r["trial"] for r in a.rows} == {0, 1, 2, 3}
    assert len({r["seed"] for r in a.rows}) == 4  # distinct derived seeds


def test_dvoretzky_pass_and_fail_regimes():
    ok = run_experiment(ExperimentConfig(kind="dvoretzky", n=400, eps=0.25, N=20,
                                         trials=6, mc_samples=2000, master_seed=2))
    assert ok.verdict == "PASS"
    # N far above the eps-critical dimension: the sandwich must fail
    bad = run_experiment(ExperimentConfig(kind="dvoretzky", n=40, eps=0.1, N=40,
                                          trials=6, mc_samples=2000, master_seed=2))
    assert bad.verdict == "FAIL"


def test_theorem_a_precondition_skip():
    cfg = ExperimentConfig(kind="theorem_a", n=64, k=8, trials=2,
                           mc_samples=1000, alpha=0.45, master_seed=3)
    rep = run_experiment(cfg)
    assert rep.verdict == "SKIP"
    assert rep.aggregates["precondition_failed"]
    assert rep.rows == []


def test_cotype_cube():
    cfg = ExperimentConfig(kind="cotype", n=64, N=32, trials=6, law="rademacher",
                           mc_samples=2000, master_seed=4)
    rep = run_experiment(cfg)
    assert rep.verdict == "PASS"
    assert rep.aggregates["cond2_freq"] >= 0.9
    assert rep.aggregates["eq5_ratio"] > 0


def test_cotype_eq5_gaussian_near_one():
    # for the gaussian law both sides of the polar-norm comparison coincide
    cfg = ExperimentConfig(kind="cotype", n=64, N=32, trials=2, law="gaussian",
                           mc_samples=6000, master_seed=4)
    rep = run_experiment(cfg)
    agg = rep.aggregates
    se = agg["width_se"] / agg["polar_norm_mean"] + \
        agg["polar_norm_se"] * agg["width"] / agg["polar_norm_mean"] ** 2
    assert abs(agg["eq5_ratio"] - 1.0) <= 3 * se


def test_bernstein_censoring_and_fit():
    # wide grid so several cells are uncensored at a modest trial count
    cfg = ExperimentConfig(kind="bernstein", law="gaussian", trials=20_000,
                           u_grid=[0.05, 0.1, 0.25], N_grid=[50, 200],
                           master_seed=6)
    rep = run_experiment(cfg)
    assert rep.verdict == "PASS"
    assert rep.aggregates["c1_hat"] > 0
    assert rep.aggregates["monotone_decay"]
    censored = [r for r in rep.rows if r["censored"]]
    for r in censored:
        assert r["upper_bound"] == pytest.approx(1.0 / r["trials"])


def test_bernstein_insufficient_data():
    # default grid at the minimum trial count: almost everything is censored
    cfg = ExperimentConfig(kind="bernstein", law="gaussian", trials=10_000,
                           u_grid=[2.0, 4.0], N_grid=[400, 800], master_seed=7)
    rep = run_experiment(cfg)
    assert rep.verdict == "INSUFFICIENT"
    assert rep.aggregates["status"] == "insufficient-data"


def test_rearrangement_experiment():
    cfg = ExperimentConfig(kind="rearrangement", n=24, N=12, trials=3,
                           vertex_count=40, mc_samples=2000, master_seed=8)
    rep = run_experiment(cfg)
    assert rep.verdict == "PASS"
    assert rep.aggregates["diameter_consistency"]
    assert rep.aggregates["ratio_spread"] <= 2.0


def test_two_stage_lemma_regime_check():
    cfg = ExperimentConfig(kind="two_stage", m=16, M=32, trials=2, master_seed=9)
    rep = run_experiment(cfg)
    assert "lemma_cube_skipped" in rep.aggregates
    assert all(r["stage"] != "lemma" for r in rep.rows)


def test_lprt_calibrated_scaling():
    cfg = ExperimentConfig(kind="lprt", cells=[[64, 8], [128, 16]], trials=3,
                           master_seed=12)
    rep = run_experiment(cfg)
    assert rep.verdict == "PASS"
    assert rep.aggregates["calibrated_c"] > 0
    for ci in (0, 1):
        assert rep.aggregates[f"cell{ci}"]["non_refutation_freq"] >= 0.9
    with pytest.raises(ConfigError):
        run_experiment(ExperimentConfig(kind="lprt", cells=[[8, 16]]))


def test_b1_intersection_bad_cells():
    with pytest.raises(ConfigError):
        run_experiment(ExperimentConfig(kind="b1_intersection", cells=[[0, 1]]))


def test_all_kinds_registered():
    assert set(EXPERIMENT_KINDS) == {
        "dvoretzky", "theorem_a", "cotype", "b1_intersection", "two_stage",
        "jl", "bernstein", "rearrangement", "lprt"}
