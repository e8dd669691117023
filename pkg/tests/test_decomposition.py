import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from paradoxlens.configs import config
from paradoxlens.core import BinningSpec, NoOverlapError
from paradoxlens.decomposition import (build_table, compute_a1, compute_a2,
                                       conditional_effect_curve,
                                       weight_divergence)
from paradoxlens.ols import ANCOVA_GAIN, GROUP, fit
from paradoxlens.simulate import generate, preset_config

from .conftest import make_dataset, random_dataset


def test_worked_dataset_a1(worked):
    assert compute_a1(worked) == pytest.approx(0.0, abs=1e-12)


def test_worked_dataset_table(worked, worked_spec):
    table = build_table(worked, worked_spec)
    assert_array_equal(table.n1, [1, 3])
    assert_array_equal(table.n0, [3, 1])
    assert_allclose(table.mean_gain_1, [3.0, 1.0])
    assert_allclose(table.mean_gain_0, [2.0, 0.0])
    assert_allclose(table.f1, [0.25, 0.75])
    assert_allclose(table.f0, [0.75, 0.25])
    assert_allclose(table.f, [0.5, 0.5])
    assert table.alpha == 0.5


def test_worked_dataset_decomposition(worked, worked_spec):
    d = compute_a2(worked, worked_spec)
    assert d.a1 == pytest.approx(0.0, abs=1e-12)
    assert d.a2 == pytest.approx(1.0, abs=1e-12)
    assert d.confounding_effect == pytest.approx(1.0, abs=1e-12)
    assert d.weight_divergence == pytest.approx(0.5, abs=1e-12)
    assert d.a1_from_group_weights == pytest.approx(d.a1, abs=1e-12)
    assert d.symmetric_half_sum == pytest.approx(1.0, abs=1e-12)
    assert d.bins_missing_a_group == ()


def test_worked_dataset_curve(worked, worked_spec):
    curve = conditional_effect_curve(worked, worked_spec)
    assert [c.difference for c in curve] == pytest.approx([1.0, 1.0])
    assert [c.center for c in curve] == pytest.approx([47.5, 62.5])
    assert sum(c.difference * c.weight for c in curve) == pytest.approx(compute_a2(worked, worked_spec).a2)


@pytest.mark.parametrize("seed", range(500))
def test_mixture_identity(seed):
    rng = np.random.default_rng(seed)
    ds = random_dataset(rng, int(rng.integers(4, 300)))
    k = int(rng.integers(1, 25))
    spec = BinningSpec.quantile(k) if seed % 2 else BinningSpec.fixed_width(k)
    table = build_table(ds, spec)
    assert table.mixture_gap() <= 1e-12
    assert table.f.sum() == pytest.approx(1.0)


@pytest.mark.parametrize("seed", range(50))
def test_a1_from_group_weights(seed):
    rng = np.random.default_rng(1000 + seed)
    n = int(rng.integers(20, 400))
    group = np.arange(n) % 2
    w_initial = rng.normal(55.0, 8.0, n) + 3.0 * group
    ds = make_dataset(zip((f"s{i}" for i in range(n)), group, w_initial, w_initial + rng.normal(0, 2, n)))
    d = compute_a2(ds, BinningSpec.quantile(int(rng.integers(1, 6))))
    assert d.a1_from_group_weights == pytest.approx(d.a1, abs=1e-9)


def test_single_bin_collapses_a2_to_a1(worked):
    d = compute_a2(worked, BinningSpec.quantile(1))
    assert d.a2 == d.a1
    assert d.confounding_effect == 0.0
    assert d.weight_divergence == 0.0


@pytest.mark.parametrize("seed", range(100))
def test_single_bin_a2_equals_a1_bit_for_bit(seed):
    rng = np.random.default_rng(3000 + seed)
    ds = random_dataset(rng, int(rng.integers(4, 500)))
    d = compute_a2(ds, BinningSpec.quantile(1))
    assert d.a2 == d.a1
    assert d.a2 == compute_a1(ds)


def test_equal_weights_collapse_confounding():
    rows = []
    for i, (w, g1, g0) in enumerate([(10.0, 3.0, 1.0), (20.0, 5.0, 2.0), (30.0, 1.0, 1.5)]):
        rows.append((f"b{i}", 1, w, w + g1))
        rows.append((f"g{i}", 0, w, w + g0))
    d = compute_a2(make_dataset(rows), BinningSpec.explicit([5, 15, 25, 35]))
    assert d.weight_divergence == 0.0
    assert d.confounding_effect == pytest.approx(0.0, abs=1e-12)


def test_weight_divergence_range():
    disjoint_bins = make_dataset([
        ("b1", 1, 10.0, 11.0), ("b2", 1, 11.0, 12.0),
        ("g1", 0, 30.0, 31.0), ("g2", 0, 31.0, 31.0),
    ])
    table = build_table(disjoint_bins, BinningSpec.explicit([0, 20, 40]))
    assert weight_divergence(table) == 1.0
    with pytest.raises(NoOverlapError):
        compute_a2(disjoint_bins, BinningSpec.explicit([0, 20, 40]))
    with pytest.raises(NoOverlapError):
        conditional_effect_curve(disjoint_bins, BinningSpec.explicit([0, 20, 40]))


def test_bins_without_a_group_are_excluded():
    ds = make_dataset([
        ("b1", 1, 10.0, 12.0), ("g1", 0, 11.0, 11.0),
        ("b2", 1, 21.0, 22.0), ("b3", 1, 22.0, 23.0),
        ("g2", 0, 32.0, 30.0),
    ])
    d = compute_a2(ds, BinningSpec.explicit([0, 15, 25, 35]))
    assert d.bins_missing_a_group == (1, 2)
    assert d.a2 == pytest.approx(2.0)
    assert_allclose(d.table.retained_weights, [1.0, 0.0, 0.0])
    assert np.isnan(d.table.mean_gain_0[1])
    assert [c.bin for c in conditional_effect_curve(ds, BinningSpec.explicit([0, 15, 25, 35]))] == [0]


def test_empty_bins_are_listed_as_missing():
    ds = make_dataset([
        ("b1", 1, 10.0, 12.0), ("g1", 0, 11.0, 11.0),
        ("b2", 1, 40.0, 41.0), ("g2", 0, 41.0, 41.0),
    ])
    d = compute_a2(ds, BinningSpec.explicit([0, 15, 25, 35, 45]))
    assert_array_equal(d.table.n1 + d.table.n0, [2, 0, 0, 2])
    assert d.bins_missing_a_group == (1, 2)
    assert d.excluded_bins == (1, 2)
    assert_allclose(d.table.retained_weights, [0.5, 0.0, 0.0, 0.5])


def _lopsided_tails(with_middle=True):
    """Края: один представитель группы на 12 другой; середина поровну"""
    rows = [("b0", 1, 5.0, 15.0), ("g2", 0, 25.0, 35.0)]
    rows += [(f"g0_{i}", 0, 5.0, 5.0) for i in range(12)]
    rows += [(f"b2_{i}", 1, 25.0, 25.0) for i in range(12)]
    if with_middle:
        rows += [(f"b1_{i}", 1, 15.0, 17.0) for i in range(6)]
        rows += [(f"g1_{i}", 0, 15.0, 15.0) for i in range(6)]
    return make_dataset(rows)


LOPSIDED_EDGES = BinningSpec.explicit([0, 10, 20, 30])


def test_thin_bins_are_excluded():
    d = compute_a2(_lopsided_tails(), LOPSIDED_EDGES)
    # f1_0 / f_0 = (1/19) / (13/38) = 2/13 < 0.2
    assert d.table.min_group_ratio == 0.2
    assert d.bins_missing_a_group == ()
    assert d.thin_bins == (0, 2)
    assert d.excluded_bins == (0, 2)
    assert d.a2 == pytest.approx(2.0, abs=1e-12)
    assert_allclose(d.table.retained_weights, [0.0, 1.0, 0.0])
    assert [c.bin for c in conditional_effect_curve(_lopsided_tails(), LOPSIDED_EDGES)] == [1]
    assert d.a1_from_group_weights == pytest.approx(d.a1, abs=1e-12)


def test_zero_ratio_keeps_every_shared_bin():
    d = compute_a2(_lopsided_tails(), LOPSIDED_EDGES, min_group_ratio=0.0)
    assert d.thin_bins == ()
    assert d.a2 == pytest.approx((13 * 10 + 12 * 2 - 13 * 10) / 38, abs=1e-12)


def test_group_ratio_from_environment(monkeypatch):
    monkeypatch.setenv("PARADOXLENS_MIN_GROUP_RATIO", "0")
    config.reload_from_env()
    assert compute_a2(_lopsided_tails(), LOPSIDED_EDGES).thin_bins == ()


def test_only_thin_bins_is_no_overlap():
    with pytest.raises(NoOverlapError, match="min_group_ratio"):
        compute_a2(_lopsided_tails(with_middle=False), LOPSIDED_EDGES)


def test_group_ratio_range():
    with pytest.raises(ValueError):
        build_table(_lopsided_tails(), LOPSIDED_EDGES, min_group_ratio=1.5)


def test_linear_case_a2_matches_ancova(lord_null):
    ds, truth = lord_null
    d = compute_a2(ds, BinningSpec.quantile(20))
    ancova = fit(ds, ANCOVA_GAIN).coef(GROUP)
    assert abs(d.a2 - ancova) <= 0.3
    assert d.a2 == pytest.approx(truth.true_a2, abs=0.75)


@pytest.mark.parametrize("seed", range(6))
def test_linear_case_holds_across_seeds(seed):
    ds, _ = generate(preset_config("lord-null", seed=seed))
    d = compute_a2(ds, BinningSpec.quantile(20))
    assert abs(d.a2 - fit(ds, ANCOVA_GAIN).coef(GROUP)) <= 0.3
    # Хвосты, где одна из групп почти отсутствует, в A2 не входят
    assert {0, d.table.n_bins - 1} <= set(d.excluded_bins)
