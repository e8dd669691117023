import json

import pytest

from paradoxlens.cli import run
from paradoxlens.cli.commands import (EXIT_IO, EXIT_NO_OVERLAP, EXIT_OK,
                                      EXIT_USAGE, EXIT_VIOLATES)
from paradoxlens.configs import config
from paradoxlens.report.schemas import ReportBundleSchema
from paradoxlens.simulate import generate, preset_config, save_scenario

from .conftest import write_csv

EDGES = "edges:40,55,70"


@pytest.fixture(scope="module")
def scenario_csvs(tmp_path_factory):
    """Два сценария по 300 в группе: гауссов и бимодальный шум"""
    folder = tmp_path_factory.mktemp("scenarios")
    paths = {}
    for name, noise in (("gaussian", "gaussian"), ("mixture", "mixture:6:0.5")):
        cfg = preset_config("lord-null", seed=3, n0=300, n1=300, noise=noise)
        ds, truth = generate(cfg)
        csv_file, _ = save_scenario(ds, cfg, truth, folder / f"{name}.csv")
        paths[name] = str(csv_file)
    return paths


# --- simulate ---

def test_simulate_writes_csv_and_sidecar(tmp_path):
    first, second = tmp_path / "a" / "data.csv", tmp_path / "b" / "data.csv"
    first.parent.mkdir()
    second.parent.mkdir()
    for path in (first, second):
        assert run(["simulate", "--preset", "lord-null", "--seed", "7", "--n0", "100", "--n1", "100",
                    "-o", str(path)]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()
    sidecar = json.loads((tmp_path / "a" / "data.scenario.json").read_text(encoding="utf-8"))
    assert sidecar["config"]["seed"] == 7
    assert (tmp_path / "a" / "data.scenario.json").read_bytes() == (tmp_path / "b" / "data.scenario.json").read_bytes()


def test_simulate_takes_seed_from_environment(tmp_path, monkeypatch):
    explicit, implicit = tmp_path / "explicit.csv", tmp_path / "implicit.csv"
    assert run(["simulate", "--seed", "11", "--n0", "20", "--n1", "20", "-o", str(explicit)]) == EXIT_OK
    monkeypatch.setenv("PARADOXLENS_SEED", "11")
    config.reload_from_env()
    assert run(["simulate", "--n0", "20", "--n1", "20", "-o", str(implicit)]) == EXIT_OK
    assert explicit.read_bytes() == implicit.read_bytes()


def test_simulate_needs_output(capsys):
    assert run(["simulate", "--seed", "1"]) == EXIT_USAGE
    assert "--output" in capsys.readouterr().err


def test_invalid_scenario_parameter(tmp_path, capsys):
    assert run(["simulate", "--rho", "1.5", "-o", str(tmp_path / "x.csv")]) == EXIT_USAGE
    assert "rho" in capsys.readouterr().err
    assert not (tmp_path / "x.csv").exists()


@pytest.mark.parametrize("argv", [
    [],
    ["fit"],
    ["simulate", "--seed", "-3", "-o", "x.csv"],
    ["analyze", "x.csv", "--bin-strategy", "edges:1"],
    ["analyze", "x.csv", "--bins", "0"],
])
def test_bad_usage(argv):
    assert run(argv) == EXIT_USAGE


def test_study_json(capsys):
    code = run(["study", "--seed", "1", "--n0", "50", "--n1", "50", "--reps", "3", "--format", "json"])
    assert code == EXIT_OK
    study = json.loads(capsys.readouterr().out)
    assert study["reps"] == 3
    assert set(study["statistics"]) == {"a1", "a2", "ancova_group_coef", "b0", "composition_delta"}
    assert study["truth"]["true_b0"] == 0.7


# --- analyze ---

def test_analyze_worked_dataset(worked_csv, capsys):
    assert run(["analyze", worked_csv, "--bin-strategy", EDGES, "--format", "json"]) == EXIT_OK
    out = capsys.readouterr().out
    report = ReportBundleSchema.model_validate_json(out)
    assert report.decomposition.a1 == pytest.approx(0.0, abs=1e-12)
    assert report.decomposition.a2 == pytest.approx(1.0, abs=1e-12)
    assert report.decomposition.confounding_effect == pytest.approx(1.0, abs=1e-12)
    assert report.decomposition.weight_divergence == pytest.approx(0.5)
    assert report.diagnostics.verdict == "insufficient_n"
    assert report.narrative

    assert run(["analyze", worked_csv, "--bin-strategy", EDGES, "--format", "json"]) == EXIT_OK
    assert capsys.readouterr().out == out


def test_analyze_text_to_file(worked_csv, tmp_path):
    output = tmp_path / "report.txt"
    assert run(["analyze", worked_csv, "--bin-strategy", EDGES, "-o", str(output)]) == EXIT_OK
    text = output.read_text(encoding="utf-8")
    assert "A1 = 0.0000" in text
    assert "A2 = 1.0000" in text
    assert "Подгруппы по W_I" in text


def test_analyze_without_overlap(tmp_path, capsys):
    path = write_csv(tmp_path / "apart.csv", [
        ("b1", 1, 10.0, 11.0), ("b2", 1, 11.0, 12.0), ("b3", 1, 12.0, 12.5),
        ("g1", 0, 30.0, 31.0), ("g2", 0, 31.0, 31.0), ("g3", 0, 32.0, 33.0),
    ])
    assert run(["analyze", path]) == EXIT_NO_OVERLAP
    assert "экстраполяции" in capsys.readouterr().err


def test_analyze_edges_must_cover_data(worked_csv, capsys):
    assert run(["analyze", worked_csv, "--bin-strategy", "edges:40,55"]) == EXIT_USAGE
    assert "ошибка использования" in capsys.readouterr().err


def test_analyze_missing_file(tmp_path, capsys):
    assert run(["analyze", str(tmp_path / "absent.csv")]) == EXIT_IO
    assert "absent.csv" in capsys.readouterr().err


def test_analyze_bad_row(tmp_path, capsys):
    path = write_csv(tmp_path / "bad.csv", [("a", 0, 1, 2), ("b", 5, 3, 4)])
    assert run(["analyze", path]) == EXIT_IO
    assert "bad.csv" in capsys.readouterr().err


def test_analyze_column_flags(tmp_path, capsys):
    path = write_csv(tmp_path / "renamed.csv", [
        ("b1", 1, 48.0, 51.0), ("b2", 1, 61.0, 62.0), ("b3", 1, 62.0, 63.0), ("b4", 1, 63.0, 64.0),
        ("g1", 0, 46.0, 48.0), ("g2", 0, 47.0, 49.0), ("g3", 0, 49.0, 51.0), ("g4", 0, 58.0, 58.0),
    ], header="pid,male,before,after")
    code = run(["analyze", path, "--col-id", "pid", "--col-group", "male", "--col-initial", "before",
                "--col-final", "after", "--bin-strategy", EDGES, "--format", "json"])
    assert code == EXIT_OK
    assert json.loads(capsys.readouterr().out)["decomposition"]["a2"] == pytest.approx(1.0)


def test_analyze_with_monte_carlo_is_byte_identical(scenario_csvs, capsys):
    argv = ["analyze", scenario_csvs["gaussian"], "--mc-draws", "199", "--seed", "5", "--format", "json"]
    assert run(argv) == EXIT_OK
    first = capsys.readouterr().out
    assert run(argv) == EXIT_OK
    assert capsys.readouterr().out == first

    report = ReportBundleSchema.model_validate_json(first)
    tested = [s for s in report.diagnostics.strata if s.symmetry_p is not None]
    assert tested
    assert all(s.dip_p is not None for s in tested)
    assert report.diagnostics.bootstrap_draws == 199
    assert report.diagnostics.verdict != "insufficient_n"


# --- plot ---

def test_plot_is_deterministic(worked_csv, tmp_path):
    first, second = tmp_path / "a.svg", tmp_path / "b.svg"
    assert run(["plot", worked_csv, "-o", str(first)]) == EXIT_OK
    assert run(["plot", worked_csv, "-o", str(second)]) == EXIT_OK
    svg = first.read_text(encoding="utf-8")
    assert "<svg" in svg
    assert "<dc:date>" not in svg
    assert first.read_bytes() == second.read_bytes()


def test_plot_needs_both_groups(tmp_path, capsys):
    path = write_csv(tmp_path / "boys.csv", [("b1", 1, 1.0, 2.0), ("b2", 1, 2.0, 3.0), ("b3", 1, 3.0, 3.5)])
    assert run(["plot", path, "-o", str(tmp_path / "boys.svg")]) != EXIT_OK
    assert "пустая группа" in capsys.readouterr().err


@pytest.mark.parametrize("flag", [["--bins", "3"], ["--alpha", "0.1"], ["--mc-draws", "9"]])
def test_plot_rejects_analysis_flags(worked_csv, tmp_path, flag):
    assert run(["plot", worked_csv, "-o", str(tmp_path / "x.svg"), *flag]) == EXIT_USAGE
    assert not (tmp_path / "x.svg").exists()


# --- diagnose ---

DIAGNOSE = ["--bins", "1", "--alpha", "0.01", "--mc-draws", "999", "--seed", "5"]


def test_diagnose_gaussian_supports(scenario_csvs, capsys):
    code = run(["diagnose", scenario_csvs["gaussian"], "--format", "json", *DIAGNOSE])
    report = json.loads(capsys.readouterr().out)
    assert code == EXIT_OK
    assert report["verdict"] == "supports_effect_reading"
    assert report["threshold"] == pytest.approx(0.01 / 8)


def test_diagnose_mixture_violates(scenario_csvs, capsys):
    code = run(["diagnose", scenario_csvs["mixture"], *DIAGNOSE])
    out = capsys.readouterr().out
    assert code == EXIT_VIOLATES
    assert "нарушено" in out


def test_diagnose_large_min_n_is_insufficient(scenario_csvs, capsys):
    code = run(["diagnose", scenario_csvs["mixture"], "--min-n", "100000", "--seed", "5"])
    assert code == EXIT_OK
    assert "min_n=100000" in capsys.readouterr().err


@pytest.mark.parametrize("flags", [["--alpha", "1.5"], ["--min-n", "5"]])
def test_diagnose_option_ranges(scenario_csvs, flags):
    assert run(["diagnose", scenario_csvs["gaussian"], *flags]) == EXIT_USAGE


def test_correction_default_is_in_help(capsys):
    assert run(["diagnose", "--help"]) == EXIT_OK
    out = " ".join(capsys.readouterr().out.split())
    assert "--correction" in out
    assert "bonferroni (по умолчанию" in out


def test_diagnose_without_correction(scenario_csvs, capsys):
    code = run(["diagnose", scenario_csvs["gaussian"], "--format", "json", "--correction", "none", *DIAGNOSE])
    report = json.loads(capsys.readouterr().out)
    assert code in (EXIT_OK, EXIT_VIOLATES)
    assert report["correction"] == "none"
    assert report["threshold"] == 0.01


def test_analyze_passes_correction(worked_csv, capsys):
    assert run(["analyze", worked_csv, "--bin-strategy", EDGES, "--correction", "none",
                "--alpha", "0.02", "--format", "json"]) == EXIT_OK
    report = ReportBundleSchema.model_validate_json(capsys.readouterr().out)
    assert report.diagnostics.correction == "none"
    assert report.diagnostics.threshold == 0.02


def test_unknown_correction_is_usage_error(scenario_csvs):
    assert run(["diagnose", scenario_csvs["gaussian"], "--correction", "holm"]) == EXIT_USAGE
