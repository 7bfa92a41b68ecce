"""Тесты загрузки когорт, окон, синтетического генератора и конфигурации."""

import json

import numpy as np
import pandas as pd
import pytest

from src.config import RunConfig, SyntheticSpec, build_config, get_settings, load_run_config
from src.config.settings import PRESETS, parse_config_text
from src.data import (
    SubjectRecord,
    TimeSeriesDataset,
    generate_synthetic,
    load_dataset,
    sample_batch,
    sample_subsequence,
    standardize,
    write_dataset,
    write_ground_truth,
)
from src.data.sampling import draw_start
from src.extraction import is_acyclic
from src.reports import correlation_oracle
from src.utils import read_labeled_matrix
from src.utils.errors import ConfigError, DataError, ParseError, UsageError


def _write_subject(path, series, names):
    pd.DataFrame(np.asarray(series).T, columns=names).to_csv(path, index=False)


def _manifest(tmp_path, rows):
    path = tmp_path / "manifest.csv"
    pd.DataFrame(rows, columns=["subject_id", "label", "path"]).to_csv(path, index=False)
    return path


@pytest.fixture
def small_cohort():
    return generate_synthetic(SyntheticSpec(n_nodes=4, n_timepoints=32, subjects_per_class=3, seed=5))


class TestStandardize:
    def test_closed_form(self):
        z, flagged = standardize([1.0, 2.0, 3.0])
        np.testing.assert_allclose(z, [-1.224744871391589, 0.0, 1.224744871391589])
        assert not flagged

    def test_constant_row(self):
        z, flagged = standardize([5.0, 5.0, 5.0])
        np.testing.assert_array_equal(z, 0.0)
        assert flagged

    def test_record_flags_constant_rows(self, caplog):
        record = SubjectRecord("s1", 0, np.array([[1.0, 2.0, 4.0], [3.0, 3.0, 3.0]])).standardize()
        assert record.constant_rows == [1]
        assert record.standardized
        assert "s1" in caplog.text

    def test_short_row(self):
        with pytest.raises(DataError):
            standardize([1.0])


class TestDataset:
    def test_record_validation(self):
        with pytest.raises(DataError):
            SubjectRecord("s", 2, np.zeros((2, 4)))
        with pytest.raises(DataError):
            SubjectRecord("s", 0, np.array([[0.0, np.nan]]))

    def test_shape_mismatch_names_subject(self):
        records = [SubjectRecord("ok", 0, np.zeros((4, 8))), SubjectRecord("bad", 1, np.zeros((3, 8)))]
        with pytest.raises(DataError, match="bad"):
            TimeSeriesDataset(records, ["a", "b", "c", "d"])

    def test_duplicate_ids(self):
        records = [SubjectRecord("s", 0, np.zeros((2, 8))), SubjectRecord("s", 1, np.zeros((2, 8)))]
        with pytest.raises(DataError):
            TimeSeriesDataset(records, ["a", "b"])

    def test_subset_and_by_label(self, small_cohort):
        dataset, _ = small_cohort
        positives = dataset.by_label(1)
        assert len(positives) == 3
        assert set(positives.labels) == {1}
        assert [r.subject_id for r in dataset.subset([0, 5]).records] == ["sub-0001", "sub-0006"]
        with pytest.raises(UsageError):
            dataset.subset([])

    def test_correlation_matrix(self, small_cohort):
        dataset, _ = small_cohort
        corr = dataset.correlation_matrix()
        assert corr.shape == (4, 4)
        np.testing.assert_array_equal(np.diag(corr), 0.0)
        np.testing.assert_allclose(corr, corr.T, atol=1e-12)


class TestLoader:
    def test_load_two_subjects(self, tmp_path, rng):
        names = ["r1", "r2", "r3", "r4"]
        (tmp_path / "s").mkdir()
        for sid in ("a", "b"):
            _write_subject(tmp_path / "s" / f"{sid}.csv", rng.normal(size=(4, 32)), names)
        manifest = _manifest(tmp_path, [["a", 0, "s/a.csv"], ["b", 1, "s/b.csv"]])
        dataset = load_dataset(manifest)
        assert (len(dataset), dataset.n_nodes, dataset.n_timepoints) == (2, 4, 32)
        assert dataset.roi_names == names
        for record in dataset.records:
            np.testing.assert_allclose(record.series.mean(axis=1), 0.0, atol=1e-12)
            np.testing.assert_allclose(record.series.std(axis=1), 1.0, atol=1e-12)

    def test_subject_with_missing_roi(self, tmp_path, rng):
        _write_subject(tmp_path / "a.csv", rng.normal(size=(4, 16)), ["r1", "r2", "r3", "r4"])
        _write_subject(tmp_path / "b.csv", rng.normal(size=(3, 16)), ["r1", "r2", "r3"])
        manifest = _manifest(tmp_path, [["a", 0, "a.csv"], ["b", 1, "b.csv"]])
        with pytest.raises(DataError, match="b"):
            load_dataset(manifest)

    def test_non_numeric_cell(self, tmp_path):
        (tmp_path / "a.csv").write_text("r1,r2\n1.0,2.0\n3.0,oops\n4.0,5.0\n", encoding="utf-8")
        manifest = _manifest(tmp_path, [["a", 0, "a.csv"]])
        with pytest.raises(ParseError) as info:
            load_dataset(manifest)
        assert info.value.row == 3
        assert info.value.column == "r2"

    def test_non_binary_label(self, tmp_path, rng):
        _write_subject(tmp_path / "a.csv", rng.normal(size=(2, 8)), ["r1", "r2"])
        with pytest.raises(DataError):
            load_dataset(_manifest(tmp_path, [["a", 2, "a.csv"]]))

    def test_missing_manifest(self, tmp_path):
        with pytest.raises(DataError):
            load_dataset(tmp_path / "absent.csv")

    def test_missing_manifest_columns(self, tmp_path):
        path = tmp_path / "manifest.csv"
        path.write_text("id,label\na,0\n", encoding="utf-8")
        with pytest.raises(ParseError):
            load_dataset(path)

    def test_write_then_load(self, tmp_path, small_cohort):
        dataset, _ = small_cohort
        loaded = load_dataset(write_dataset(dataset, tmp_path))
        assert [r.subject_id for r in loaded.records] == [r.subject_id for r in dataset.records]
        assert loaded.roi_names == dataset.roi_names
        for a, b in zip(loaded.records, dataset.records):
            assert a.label == b.label
            np.testing.assert_allclose(a.series, b.series, atol=1e-12)


class TestSampling:
    def test_full_length_window(self, rng):
        record = SubjectRecord("s", 0, rng.normal(size=(3, 10)))
        window = sample_subsequence(record, 10, rng)
        assert window.shape == (3, 10, 1)
        np.testing.assert_array_equal(window.data[..., 0], record.series)

    def test_window_longer_than_series(self, rng):
        with pytest.raises(ConfigError):
            draw_start(10, 11, rng)

    def test_reproducible_starts(self):
        rng1, rng2 = np.random.default_rng(3), np.random.default_rng(3)
        starts1 = [draw_start(100, 16, rng1) for _ in range(20)]
        starts2 = [draw_start(100, 16, rng2) for _ in range(20)]
        assert starts1 == starts2
        assert draw_start(16, 16, rng1) == 0
        assert all(0 <= s <= 84 for s in starts1)

    def test_starts_are_uniform(self):
        rng = np.random.default_rng(0)
        counts = np.bincount([draw_start(20, 16, rng) for _ in range(10_000)], minlength=5)
        assert len(counts) == 5
        np.testing.assert_allclose(counts / 1e4, 0.2, atol=0.02)

    def test_batch_layout(self, small_cohort, rng):
        dataset, _ = small_cohort
        batch = sample_batch(dataset.records, 8, rng)
        assert batch.x.shape == (6, 4, 8, 1)
        np.testing.assert_array_equal(batch.labels, [0, 0, 0, 1, 1, 1])
        for record, start, x in zip(dataset.records, batch.starts, batch.x):
            np.testing.assert_array_equal(x[..., 0], record.series[:, start : start + 8])


class TestSynthetic:
    def test_shapes_and_labels(self, small_cohort):
        dataset, truth = small_cohort
        assert (len(dataset), dataset.n_nodes, dataset.n_timepoints) == (6, 4, 32)
        assert dataset.roi_names == ["roi_01", "roi_02", "roi_03", "roi_04"]
        np.testing.assert_array_equal(np.bincount(dataset.labels), [3, 3])
        assert truth.adjacency.shape == (4, 4)

    def test_truth_is_acyclic_and_ordered(self):
        for seed in range(20):
            _, truth = generate_synthetic(SyntheticSpec(n_nodes=8, n_timepoints=4, subjects_per_class=1, seed=seed))
            assert is_acyclic(truth.adjacency)
            rank = {node: k for k, node in enumerate(truth.order)}
            for j, i in np.argwhere(truth.adjacency != 0):
                assert rank[j] < rank[i]
            weights = np.abs(truth.adjacency[truth.adjacency != 0])
            assert np.all((weights >= 0.5) & (weights <= 1.5))

    def test_class_scale_applies_to_perturbed_edges(self):
        _, truth = generate_synthetic(SyntheticSpec(n_nodes=8, subjects_per_class=1, n_timepoints=4, seed=1))
        scaled = truth.class_adjacency(2.0)
        for j, i in truth.perturbed_edges:
            assert scaled[j, i] == 2.0 * truth.adjacency[j, i]
        untouched = np.ones_like(truth.adjacency, dtype=bool)
        for j, i in truth.perturbed_edges:
            untouched[j, i] = False
        np.testing.assert_array_equal(scaled[untouched], truth.adjacency[untouched])

    def test_deterministic(self):
        spec = SyntheticSpec(n_nodes=5, n_timepoints=20, subjects_per_class=2, seed=9)
        (a, truth_a), (b, truth_b) = generate_synthetic(spec), generate_synthetic(spec)
        np.testing.assert_array_equal(truth_a.adjacency, truth_b.adjacency)
        for ra, rb in zip(a.records, b.records):
            np.testing.assert_array_equal(ra.series, rb.series)

    def test_seed_changes_cohort(self):
        a, _ = generate_synthetic(SyntheticSpec(n_nodes=5, n_timepoints=20, subjects_per_class=2, seed=1))
        b, _ = generate_synthetic(SyntheticSpec(n_nodes=5, n_timepoints=20, subjects_per_class=2, seed=2))
        assert not np.array_equal(a.records[0].series, b.records[0].series)

    def test_ground_truth_files(self, tmp_path, small_cohort):
        dataset, truth = small_cohort
        spec = SyntheticSpec(n_nodes=4, n_timepoints=32, subjects_per_class=3, seed=5)
        write_ground_truth(spec, truth, dataset.roi_names, tmp_path)
        matrix, names = read_labeled_matrix(tmp_path / "ground_truth_A.csv")
        np.testing.assert_array_equal(matrix, truth.adjacency)
        assert names == dataset.roi_names
        edges = pd.read_csv(tmp_path / "ground_truth_edges.csv")
        assert len(edges) == np.count_nonzero(truth.adjacency)
        sidecar = json.loads((tmp_path / "ground_truth.json").read_text(encoding="utf-8"))
        assert sidecar["spec"]["seed"] == 5
        assert sidecar["topological_order"] == truth.order

    @pytest.mark.parametrize(
        "values",
        [
            {"edge_probability": 1.5},
            {"weight_low": 2.0, "weight_high": 1.0},
            {"n_nodes": 1},
            {"unknown": 3},
        ],
    )
    def test_invalid_spec(self, tmp_path, values):
        path = tmp_path / "spec.json"
        path.write_text(json.dumps(values), encoding="utf-8")
        with pytest.raises(ConfigError):
            SyntheticSpec.from_file(path)

    def test_spec_defaults(self):
        spec = SyntheticSpec.from_file(None)
        assert (spec.n_nodes, spec.n_timepoints, spec.subjects_per_class) == (10, 256, 100)


@pytest.mark.slow
def test_no_class_signal_without_scaling():
    dataset, _ = generate_synthetic(SyntheticSpec(class_scale=1.0))
    accuracy = np.mean([correlation_oracle(dataset, test_size=0.5, seed=s).accuracy for s in range(10)])
    assert abs(accuracy - 0.5) <= 0.05


@pytest.mark.slow
def test_default_cohort_is_separable():
    dataset, _ = generate_synthetic(SyntheticSpec())
    assert correlation_oracle(dataset).accuracy >= 0.9


class TestConfig:
    def test_defaults(self):
        settings = get_settings()
        assert settings.subsequence_length == 128
        assert settings.voters == 64
        assert settings.l1_lambda == 1e-3
        assert settings.temporal_kernel == 7
        assert settings.epoch_budget == settings.inner_epochs * settings.k_max
        assert get_settings() is settings

    def test_key_value_text(self):
        values = parse_config_text("# comment\nl1_lambda = 0.01\nseed=4\nfixed_graph_epochs = none\n")
        assert values == {"l1_lambda": "0.01", "seed": "4", "fixed_graph_epochs": None}
        settings = build_config(values)
        assert settings.l1_lambda == 0.01
        assert settings.seed == 4

    def test_json_file_with_override(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"seed": 3, "voters": 8}), encoding="utf-8")
        settings = load_run_config(path, seed=11)
        assert settings.seed == 11
        assert settings.voters == 8

    def test_unknown_key(self):
        with pytest.raises(ConfigError):
            build_config({"learning_rat": 0.1})

    def test_bad_syntax(self):
        with pytest.raises(ConfigError):
            parse_config_text("seed 4")
        with pytest.raises(ConfigError):
            parse_config_text("seed=1\nseed=2")

    def test_even_kernel(self):
        with pytest.raises(ConfigError):
            build_config(temporal_kernel=4)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_run_config(tmp_path / "absent.cfg")

    @pytest.mark.parametrize("preset", ["hcp", "adni"])
    def test_presets(self, preset):
        settings = build_config(preset=preset)
        assert settings.subsequence_length == PRESETS[preset]["subsequence_length"]
        assert settings.voters == PRESETS[preset]["voters"]

    def test_preset_explicit_value_wins(self):
        assert build_config(preset="adni", voters=3).voters == 3

    def test_environment(self, monkeypatch):
        monkeypatch.setenv("STDAGCN_SEED", "21")
        assert RunConfig().seed == 21

    def test_echo(self, tmp_path):
        path = build_config(seed=2).echo(tmp_path)
        assert json.loads(path.read_text(encoding="utf-8"))["seed"] == 2
