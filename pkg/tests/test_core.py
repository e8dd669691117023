import numpy as np
import pytest
from numpy.testing import assert_array_equal

from paradoxlens.core import (BinningSpec, ColumnSchema, CoverageError,
                              DataValidationError, Dataset, RowParseError,
                              SchemaError, assign_bins, load_csv, save_csv,
                              support_overlap)

from .conftest import WORKED_ROWS, make_dataset, random_dataset, write_csv


def _by_initial(values, groups=None) -> Dataset:
    values = np.asarray(values, dtype=np.float64)
    if groups is None:
        groups = np.arange(values.size) % 2
    return Dataset(
        subject_ids=tuple(f"s{i}" for i in range(values.size)),
        group=np.asarray(groups),
        w_initial=values,
        w_final=values + 1.0,
    )


# --- load_csv / save_csv ---

def test_load_four_rows(tmp_path):
    path = write_csv(tmp_path / "four.csv", [
        ("a", 0, 50.0, 52.5),
        ("b", 1, 60.0, 59.0),
        ("c", 0, 55.5, 55.5),
        ("d", 1, 61.25, 70.0),
    ])
    ds = load_csv(path)
    assert ds.n == 4
    assert ds.subject_ids == ("a", "b", "c", "d")
    assert_array_equal(ds.group, [0, 1, 0, 1])
    assert_array_equal(ds.gain, [2.5, -1.0, 0.0, 8.75])


def test_group_label_outside_domain_cites_row(tmp_path):
    path = write_csv(tmp_path / "bad.csv", [("a", 0, 1, 2), ("b", 2, 3, 4)])
    with pytest.raises(DataValidationError) as info:
        load_csv(path)
    assert info.value.row == 1


def test_missing_column_is_named(tmp_path):
    path = write_csv(tmp_path / "cols.csv", [("a", 0, 1)], header="id,sex,w_initial")
    with pytest.raises(SchemaError) as info:
        load_csv(path)
    assert info.value.column == "w_final"


@pytest.mark.parametrize("value", ["abc", "nan", "inf", ""])
def test_unparsable_measurement(tmp_path, value):
    path = write_csv(tmp_path / "parse.csv", [("a", 0, 1, 2), ("b", 1, 3, 4), ("c", 1, value, 5)])
    with pytest.raises(RowParseError) as info:
        load_csv(path)
    assert info.value.row == 2
    assert info.value.column == "w_initial"


def test_duplicate_subject_id(tmp_path):
    path = write_csv(tmp_path / "dup.csv", [("a", 0, 1, 2), ("a", 1, 3, 4)])
    with pytest.raises(DataValidationError, match="subject_id"):
        load_csv(path)


def test_column_remapping(tmp_path):
    path = write_csv(tmp_path / "remap.csv", [("x", "1", 10, 11), ("y", "0", 12, 15)],
                     header="pid,male,before,after")
    ds = load_csv(path, ColumnSchema(subject_id="pid", group="male", w_initial="before", w_final="after"))
    assert_array_equal(ds.gain, [1.0, 3.0])


def test_input_gain_column_is_recomputed(tmp_path):
    path = write_csv(tmp_path / "gain.csv", [("a", 0, 1.5, 2.0, 99), ("b", 1, 3, 4, 99)],
                     header="id,sex,w_initial,w_final,gain")
    ds = load_csv(path)
    assert_array_equal(ds.gain, [0.5, 1.0])


def test_worked_dataset_round_trip(tmp_path, worked_csv):
    first = load_csv(worked_csv)
    save_csv(first, tmp_path / "a.csv")
    second = load_csv(tmp_path / "a.csv")
    save_csv(second, tmp_path / "b.csv")
    assert first == second
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_gain_identity_is_exact(tmp_path):
    ds = random_dataset(np.random.default_rng(3), 300)
    save_csv(ds, tmp_path / "r.csv")
    loaded = load_csv(tmp_path / "r.csv")
    assert loaded == ds
    assert_array_equal(loaded.gain, loaded.w_final - loaded.w_initial)


# --- Dataset ---

def test_dataset_rejects_bad_rows():
    with pytest.raises(DataValidationError) as info:
        make_dataset([("a", 0, 1.0, 2.0), ("b", 3, 1.0, 2.0)])
    assert info.value.row == 1
    with pytest.raises(DataValidationError):
        make_dataset([("a", 0, 1.0, np.inf)])


def test_dataset_is_read_only(worked):
    with pytest.raises(ValueError):
        worked.w_initial[0] = 0.0


def test_fingerprint_tracks_content(worked):
    assert worked.fingerprint() == make_dataset(WORKED_ROWS).fingerprint()
    assert worked.take(np.arange(worked.n)[::-1]).fingerprint() != worked.fingerprint()


def test_require_both_groups():
    ds = make_dataset([("a", 1, 1.0, 2.0), ("b", 1, 2.0, 3.0)])
    with pytest.raises(DataValidationError, match="пустая группа"):
        ds.require_both_groups()


# --- binning ---

def test_fixed_width_split_at_midpoint():
    assignment = assign_bins(_by_initial([1, 2, 3, 4]), BinningSpec.fixed_width(2))
    assert_array_equal(assignment.indices, [0, 0, 1, 1])
    assert assignment.edges[1] == pytest.approx(2.5)


def test_single_quantile_bin():
    assignment = assign_bins(_by_initial([5, 1, 9, 3]), BinningSpec.quantile(1))
    assert_array_equal(assignment.indices, [0, 0, 0, 0])


def test_quantile_median_split():
    assignment = assign_bins(_by_initial(range(1, 9)), BinningSpec.quantile(2))
    assert_array_equal(assignment.indices, [0, 0, 0, 0, 1, 1, 1, 1])


def test_explicit_edges_must_cover_data():
    with pytest.raises(CoverageError) as info:
        assign_bins(_by_initial(range(1, 9)), BinningSpec.explicit([0, 5.5]))
    assert info.value.uncovered == (6.0, 7.0, 8.0)


def test_last_explicit_bin_is_closed(worked_spec):
    ds = _by_initial([40, 55, 70])
    assignment = assign_bins(ds, worked_spec)
    assert_array_equal(assignment.indices, [0, 1, 1])


@pytest.mark.parametrize("seed", range(20))
def test_binning_is_partition(seed):
    rng = np.random.default_rng(seed)
    ds = random_dataset(rng, int(rng.integers(5, 200)))
    for spec in (BinningSpec.fixed_width(int(rng.integers(1, 12))), BinningSpec.quantile(int(rng.integers(1, 12)))):
        assignment = assign_bins(ds, spec)
        assert assignment.sizes.sum() == ds.n
        assert assignment.indices.min() >= 0
        assert assignment.indices.max() < assignment.n_bins
        assert np.all(np.diff(assignment.edges) >= 0)


@pytest.mark.parametrize("spec", [
    dict(strategy="quantile", k=0),
    dict(strategy="fixed_width", k=2.5),
    dict(strategy="explicit", edges=(1.0,)),
    dict(strategy="explicit", edges=(1.0, 1.0, 2.0)),
    dict(strategy="lognormal", k=3),
])
def test_binning_spec_validation(spec):
    with pytest.raises(DataValidationError):
        BinningSpec(**spec)


def test_default_and_diagnostic_binning():
    ds = _by_initial(np.linspace(0, 1, 400))
    assert BinningSpec.default_for(ds) == BinningSpec.quantile(10)
    assert BinningSpec.diagnostic_for(ds, max_bins=4) == BinningSpec.quantile(4)
    small = _by_initial(np.arange(8.0))
    assert BinningSpec.default_for(small) == BinningSpec.quantile(1)


# --- support_overlap ---

def test_partial_overlap():
    ds = _by_initial([40, 60, 50, 80], groups=[0, 0, 1, 1])
    report = support_overlap(ds)
    assert report.group_ranges == {0: (40.0, 60.0), 1: (50.0, 80.0)}
    assert report.intersection == (50.0, 60.0)
    assert report.inside_fraction == {0: 0.5, 1: 0.5}
    assert report.partial and not report.extrapolation_required


def test_identical_ranges_overlap_fully():
    report = support_overlap(_by_initial([1, 1, 5, 5, 3, 2]))
    assert report.inside_fraction == {0: 1.0, 1: 1.0}
    assert not report.partial


def test_disjoint_ranges_require_extrapolation():
    report = support_overlap(_by_initial([1, 2, 10, 11], groups=[0, 0, 1, 1]))
    assert report.intersection is None
    assert report.inside_fraction == {0: 0.0, 1: 0.0}
    assert report.extrapolation_required


def test_overlap_fraction_is_monotone():
    girls = [40, 45, 50, 55, 60]
    narrow = support_overlap(_by_initial(girls + [52, 58], groups=[0] * 5 + [1] * 2))
    wide = support_overlap(_by_initial(girls + [52, 58, 41], groups=[0] * 5 + [1] * 3))
    assert wide.inside_fraction[0] >= narrow.inside_fraction[0]
