import json
from dataclasses import asdict, replace

import numpy as np
import pytest
from numpy.testing import assert_array_equal

from paradoxlens.configs import config
from paradoxlens.core import BinningSpec, ScenarioConfigError, load_csv
from paradoxlens.decomposition import compute_a1, compute_a2
from paradoxlens.ols import ANCOVA_FINAL, GROUP, fit
from paradoxlens.simulate import (NoiseSpec, ScenarioConfig, ScenarioTruth,
                                  generate, preset_config, replicate_seed,
                                  replicate_study, run_replicate,
                                  save_scenario, sidecar_path)


def test_same_config_same_dataset():
    cfg = preset_config("lord-null", seed=42, n0=50, n1=70)
    first, truth = generate(cfg)
    second, _ = generate(cfg)
    assert first == second
    assert first.n == 120
    assert_array_equal(first.group[:50], 0)
    assert_array_equal(first.group[50:], 1)
    assert truth == ScenarioTruth.of(cfg)


def test_different_seeds_differ():
    first, _ = generate(preset_config("lord-null", seed=1, n0=20, n1=20))
    second, _ = generate(preset_config("lord-null", seed=2, n0=20, n1=20))
    assert first != second


def test_perfect_correlation_without_gain_copies_initial_weight():
    cfg = preset_config("lord-null", seed=3, n0=100, n1=100, rho=1.0)
    assert cfg.noise_sd == 0.0
    ds, truth = generate(cfg)
    assert_array_equal(ds.w_final, ds.w_initial)
    assert compute_a1(ds) == 0.0
    assert compute_a2(ds, BinningSpec.quantile(4)).a2 == pytest.approx(0.0, abs=1e-12)
    assert truth.true_ancova_group_coef == 0.0


def test_gain_without_regression_to_mean():
    ds, truth = generate(preset_config("lord-null", seed=4, n0=100, n1=100, rho=1.0, gain1=2.0))
    assert compute_a1(ds) == pytest.approx(2.0, abs=1e-10)
    assert fit(ds, ANCOVA_FINAL).coef(GROUP) == pytest.approx(2.0, abs=1e-10)
    assert truth.true_a1 == 2.0


def test_truth_of_lord_null():
    truth = ScenarioTruth.of(preset_config("lord-null", seed=0))
    assert truth.true_a1 == 0.0
    assert truth.true_ancova_group_coef == pytest.approx(3.0)
    assert truth.true_b0 == 0.7
    assert truth.true_residual_variance_submodel == pytest.approx(25.0)
    assert truth.true_residual_variance_supermodel == pytest.approx(12.75)


@pytest.mark.parametrize("family", ["gaussian", "laplace", "mixture"])
def test_noise_variance_matches_family(family):
    cfg = preset_config("lord-null", seed=6, n0=20000, n1=2, noise=family)
    ds, truth = generate(cfg)
    girls = ds.group == 0
    noise = ds.w_final[girls] - cfg.mu0 - cfg.rho * (ds.w_initial[girls] - cfg.mu0)
    assert noise.mean() == pytest.approx(0.0, abs=0.15)
    assert noise.var() == pytest.approx(truth.true_residual_variance_supermodel, rel=0.05)


@pytest.mark.parametrize("overrides, field", [
    (dict(rho=1.5), "rho"),
    (dict(n0=1), "n0"),
    (dict(n1=10.5), "n1"),
    (dict(sigma=0.0), "sigma"),
    (dict(mu1=float("nan")), "mu1"),
    (dict(seed=-1), "seed"),
])
def test_invalid_parameters_name_the_field(overrides, field):
    params = dict(seed=0)
    params.update(overrides)
    with pytest.raises(ScenarioConfigError) as info:
        ScenarioConfig(**params)
    assert info.value.field == field


def test_unknown_preset():
    with pytest.raises(ScenarioConfigError) as info:
        preset_config("placebo", seed=0)
    assert info.value.field == "preset"


def test_noise_parsing():
    assert NoiseSpec.parse("gaussian") == NoiseSpec()
    assert NoiseSpec.parse("laplace").family == "laplace"
    assert NoiseSpec.parse("mixture:4") == NoiseSpec("mixture", 4.0, 0.5)
    assert NoiseSpec.parse("mixture:6:0.3") == NoiseSpec("mixture", 6.0, 0.3)
    assert NoiseSpec.parse("mixture:6:0.3").describe() == "mixture:6:0.3"


@pytest.mark.parametrize("text", ["cauchy", "gaussian:2", "mixture:x", "mixture:6:0.5:1", "mixture:6:1.0"])
def test_bad_noise_is_rejected(text):
    with pytest.raises(ScenarioConfigError) as info:
        NoiseSpec.parse(text)
    assert info.value.field.startswith("noise")


def test_sidecar_path(tmp_path):
    assert sidecar_path(tmp_path / "data.csv") == tmp_path / "data.scenario.json"
    assert sidecar_path("data") == sidecar_path("data.csv")


def test_save_scenario(tmp_path):
    cfg = preset_config("gain", seed=5, n0=30, n1=40)
    ds, truth = generate(cfg)
    csv_file, json_file = save_scenario(ds, cfg, truth, tmp_path / "data.csv")
    assert load_csv(csv_file) == ds

    text = json_file.read_text(encoding="utf-8")
    sidecar = json.loads(text)
    assert list(sidecar) == sorted(sidecar)
    assert sidecar["truth"] == pytest.approx(asdict(truth))
    assert sidecar["config"]["gain1"] == 2.0
    assert sidecar["config"]["noise"]["family"] == "gaussian"
    assert sidecar["rng"] == config.simulation.rng_algorithm

    save_scenario(ds, cfg, truth, tmp_path / "again.csv")
    assert (tmp_path / "again.scenario.json").read_text(encoding="utf-8") == text


# --- replicate_study ---

def test_replicate_seed_is_stable():
    assert replicate_seed(7, 3) == replicate_seed(7, 3)
    assert len({replicate_seed(7, r) for r in range(50)}) == 50
    assert replicate_seed(7, 0) != replicate_seed(8, 0)


def test_single_replicate_study():
    cfg = preset_config("lord-null", seed=9, n0=80, n1=80)
    summary = replicate_study(cfg, reps=1)
    single = run_replicate(cfg, 0)
    assert summary.replicates == (single,)
    assert summary.statistics["a1"].mean == single.a1
    assert summary.statistics["a1"].sd == 0.0
    assert summary.truth == ScenarioTruth.of(cfg)


def test_worker_count_does_not_change_results():
    cfg = preset_config("lord-null", seed=10, n0=100, n1=100)
    sequential = replicate_study(cfg, reps=6, workers=1)
    parallel = replicate_study(cfg, reps=6, workers=2)
    assert sequential == parallel
    assert [r.index for r in parallel.replicates] == list(range(6))


def test_replicate_uses_derived_seed():
    cfg = preset_config("lord-null", seed=12, n0=60, n1=60)
    stats = run_replicate(cfg, 4)
    ds, _ = generate(replace(cfg, seed=replicate_seed(12, 4)))
    assert stats.seed == replicate_seed(12, 4)
    assert stats.a1 == compute_a1(ds)


def test_study_needs_replicates():
    with pytest.raises(ValueError):
        replicate_study(preset_config("lord-null", seed=0, n0=20, n1=20), reps=0)


@pytest.mark.slow
def test_null_scenario_estimates_are_unbiased():
    cfg = preset_config("lord-null", seed=2024, n0=200, n1=200)
    summary = replicate_study(cfg, reps=200, workers=4)
    a1 = summary.statistics["a1"]
    b0 = summary.statistics["b0"]
    assert abs(a1.mean) <= 3 * a1.se
    assert abs(b0.mean - 0.7) <= 3 * b0.se
    assert summary.statistics["composition_delta"].mean <= 1e-8
    coef = summary.statistics["ancova_group_coef"]
    assert abs(coef.mean - 3.0) <= 3 * coef.se
    assert all(np.isfinite(r.a2) for r in summary.replicates)
