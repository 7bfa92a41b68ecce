"""Тесты ограничения ацикличности, функции оценки и расширенного лагранжиана."""

import math

import numpy as np
import pytest

from src.config import SyntheticSpec, build_config
from src.data import Batch, SubjectRecord, TimeSeriesDataset, generate_synthetic, sample_batch
from src.engine import Mode, Tensor
from src.extraction import extract_dag, find_cycle, is_acyclic, topological_order
from src.learning import (
    TRAJECTORY_COLUMNS,
    AugLagState,
    ScoreConfig,
    TerminationReason,
    acyclicity,
    acyclicity_grad,
    fit,
    fit_fixed_graph,
    inner_solve,
    outer_step,
    score,
    score_terms,
)
from src.learning import solver
from src.models import BrainGraph, ModelParams
from src.utils import derive_rng
from src.utils.errors import ConfigError, DataError, OptimizationDiverged, UsageError


def _random_digraph(rng, n):
    """Случайный взвешенный орграф; веса |w| ∈ [√N, 2√N], половина графов ацикличны по построению."""
    density = rng.uniform(0.05, 0.4)
    support = rng.random((n, n)) < density
    np.fill_diagonal(support, False)
    if rng.random() < 0.5:
        order = rng.permutation(n)
        rank = np.empty(n, dtype=int)
        rank[order] = np.arange(n)
        support &= rank[:, None] < rank[None, :]
    weights = rng.uniform(math.sqrt(n), 2.0 * math.sqrt(n), size=(n, n)) * rng.choice([-1.0, 1.0], size=(n, n))
    return np.where(support, weights, 0.0)


@pytest.fixture
def tiny_settings():
    return build_config(
        subsequence_length=16,
        voters=4,
        inner_epochs=2,
        k_max=2,
        hidden_channels=4,
        temporal_kernel=3,
        batch_size=4,
        seed=11,
    )


@pytest.fixture
def tiny_dataset():
    spec = SyntheticSpec(n_nodes=4, n_timepoints=40, subjects_per_class=4, seed=3)
    return generate_synthetic(spec)[0]


class TestAcyclicity:
    def test_zero_matrix(self):
        assert acyclicity(np.zeros((4, 4))) == 0.0
        np.testing.assert_array_equal(acyclicity_grad(np.zeros((4, 4))), 0.0)

    def test_two_cycle_hand_value(self):
        assert acyclicity(np.array([[0.0, 1.0], [1.0, 0.0]])) == pytest.approx(0.5, abs=1e-12)

    def test_upper_triangular_is_zero(self, rng):
        a = np.triu(rng.normal(size=(7, 7)), k=1)
        assert acyclicity(a) <= 1e-12

    def test_brain_graph_uses_alpha(self):
        graph = BrainGraph([[0.0, 1.0], [1.0, 0.0]])
        assert acyclicity(graph) == pytest.approx(0.5, abs=1e-12)

    def test_non_finite(self):
        with pytest.raises(DataError):
            acyclicity(np.array([[0.0, np.inf], [0.0, 0.0]]))

    def test_characterizes_acyclicity(self):
        rng = np.random.default_rng(2024)
        for _ in range(200):
            a = _random_digraph(rng, int(rng.integers(2, 21)))
            h = acyclicity(a)
            assert h >= 0.0
            assert (find_cycle(a) is None) == is_acyclic(a)
            if is_acyclic(a):
                assert h <= 1e-12
            else:
                assert h > 1e-8

    def test_gradient_matches_finite_differences(self, fd):
        numerical_grad, relative_error = fd
        rng = np.random.default_rng(7)
        for _ in range(50):
            a = rng.normal(size=(6, 6))
            numeric = numerical_grad(lambda: acyclicity(a, alpha=1.0 / 6), a)
            assert relative_error(acyclicity_grad(a), numeric) < 1e-6

    def test_gradient_vanishes_where_a_is_zero(self, rng):
        a = np.triu(rng.normal(size=(5, 5)), k=1)
        grad = acyclicity_grad(a)
        assert np.all(grad[a == 0.0] == 0.0)


class TestOuterStep:
    def test_multiplier_update(self):
        state = outer_step(0.5, AugLagState())
        assert state.eta == 0.5
        assert state.k == 1
        assert state.h_prev == 0.5

    def test_penalty_grows_without_progress(self):
        state = outer_step(0.3, AugLagState(h_prev=0.5))
        assert state.c == 10.0

    def test_penalty_kept_with_progress(self):
        state = outer_step(0.1, AugLagState(h_prev=0.5))
        assert state.c == 1.0

    def test_first_step_never_grows(self):
        assert outer_step(1e6, AugLagState()).c == 1.0

    def test_penalty_non_decreasing(self):
        state = AugLagState()
        history = [state.c]
        for h in (0.9, 0.8, 0.1, 0.09, 0.001, 0.0009):
            state = outer_step(h, state)
            history.append(state.c)
        assert history == sorted(history)

    def test_negative_h(self):
        with pytest.raises(UsageError):
            outer_step(-1e-3, AugLagState())

    def test_invalid_parameters(self):
        with pytest.raises(ConfigError):
            AugLagState(beta=1.0)
        with pytest.raises(ConfigError):
            AugLagState(gamma=1.0)


class TestScore:
    def test_l1_term(self, rng, tiny_dataset):
        graph = BrainGraph(np.array([[0.0, 0.5, -0.5, 0.0], [0.0, 0.0, 0.0, 1.0], [0.0] * 4, [0.0] * 4]))
        params = ModelParams.create(4, rng, hidden_channels=4, kernel=3, dropout=0.0)
        batch = sample_batch(tiny_dataset.records, 16, rng)
        total, cross_entropy = score_terms(batch, graph, params, ScoreConfig(l1_lambda=1e-3), Mode.EVAL)
        assert total.item() - cross_entropy.item() == pytest.approx(2e-3, abs=1e-12)

    def test_confident_correct_logits(self, rng, tiny_dataset):
        params = ModelParams.create(4, rng, hidden_channels=4, kernel=3, dropout=0.0)
        params.head_b.data = np.array([50.0])
        positives = tiny_dataset.by_label(1)
        batch = sample_batch(positives.records, 16, rng)
        value = score(batch, BrainGraph(np.zeros((4, 4))), params, ScoreConfig(l1_lambda=0.0), Mode.EVAL)
        assert value.item() == pytest.approx(0.0, abs=1e-20)

    def test_empty_batch(self, rng):
        batch = Batch(x=np.zeros((0, 2, 16, 1)), labels=np.zeros(0), starts=np.zeros(0, dtype=np.int64))
        with pytest.raises(UsageError):
            score(batch, BrainGraph(np.zeros((2, 2))), ModelParams.create(2, rng, hidden_channels=2), ScoreConfig())

    def test_invalid_config(self):
        with pytest.raises(ConfigError):
            ScoreConfig(l1_lambda=-1.0)
        with pytest.raises(ConfigError):
            ScoreConfig(batch_size=0)


class TestInnerSolve:
    def test_zero_learning_rate_keeps_parameters(self, rng, tiny_dataset):
        graph = BrainGraph.random(4, 0.1, rng)
        params = ModelParams.create(4, rng, hidden_channels=4, kernel=3)
        before_a = graph.numpy()
        before = {k: t.data.copy() for k, t in params.named_parameters().items()}
        cfg = ScoreConfig(learning_rate=0.0, inner_epochs=2, batch_size=4)
        inner_solve(tiny_dataset, graph, params, AugLagState(), cfg, subsequence_length=16, rng=rng)
        np.testing.assert_array_equal(graph.numpy(), before_a)
        for name, tensor in params.named_parameters().items():
            np.testing.assert_array_equal(tensor.data, before[name])

    def test_one_row_per_epoch(self, rng, tiny_dataset):
        graph = BrainGraph.random(4, 0.1, rng)
        params = ModelParams.create(4, rng, hidden_channels=4, kernel=3)
        trajectory = []
        cfg = ScoreConfig(inner_epochs=3, batch_size=3)
        inner_solve(tiny_dataset, graph, params, AugLagState(), cfg, subsequence_length=16, rng=rng, trajectory=trajectory)
        assert [row.epoch for row in trajectory] == [1, 2, 3]
        assert all(row.h is not None and row.cross_entropy > 0 for row in trajectory)
        assert np.all(np.diag(graph.numpy()) == 0.0)

    def test_toy_problem_descends(self, rng):
        series = np.linspace(-1.0, 1.0, 20)
        records = [
            SubjectRecord("neg", 0, np.stack([series, -series, series])),
            SubjectRecord("pos", 1, np.stack([series, series, -series])),
        ]
        dataset = TimeSeriesDataset(records, ["a", "b", "c"])
        graph = BrainGraph.random(3, 0.1, rng)
        params = ModelParams.create(3, rng, hidden_channels=4, kernel=3, dropout=0.0)
        trajectory = []
        cfg = ScoreConfig(learning_rate=1e-2, inner_epochs=200, batch_size=2, dropout=0.0)
        inner_solve(dataset, graph, params, AugLagState(), cfg, subsequence_length=16, rng=rng, trajectory=trajectory)
        assert trajectory[-1].cross_entropy < trajectory[0].cross_entropy

    def test_non_finite_loss_reports_last_row(self, rng, tiny_dataset, monkeypatch):
        graph = BrainGraph.random(4, 0.1, rng)
        params = ModelParams.create(4, rng, hidden_channels=4, kernel=3)
        cfg = ScoreConfig(inner_epochs=1, batch_size=8)
        trajectory = []
        inner_solve(tiny_dataset, graph, params, AugLagState(), cfg, subsequence_length=16, rng=rng, trajectory=trajectory)

        def diverged(*args, **kwargs):
            return Tensor(np.array(np.inf)), Tensor(np.array(np.inf))

        monkeypatch.setattr(solver, "score_terms", diverged)
        with pytest.raises(OptimizationDiverged) as info:
            inner_solve(tiny_dataset, graph, params, AugLagState(), cfg, subsequence_length=16, rng=rng, trajectory=trajectory)
        assert info.value.last_row["epoch"] == 1
        assert len(trajectory) == 1


class TestFit:
    def test_iteration_limit_without_outer_steps(self, tiny_dataset, tiny_settings):
        settings = tiny_settings.model_copy(update={"k_max": 0})
        result = fit(tiny_dataset, settings)
        assert result.reason == TerminationReason.ITERATION_LIMIT
        assert result.trajectory == []
        expected = BrainGraph.random(4, settings.init_scale, derive_rng(settings.seed, 0))
        np.testing.assert_array_equal(result.graph.numpy(), expected.numpy())

    def test_trajectory_schema_and_order(self, tiny_dataset, tiny_settings, tmp_path):
        result = fit(tiny_dataset, tiny_settings)
        assert len(result.trajectory) == tiny_settings.inner_epochs * len({r.outer_k for r in result.trajectory})
        epochs = [row.epoch for row in result.trajectory]
        assert epochs == sorted(set(epochs))
        frame = result.trajectory_frame()
        assert list(frame.columns) == TRAJECTORY_COLUMNS
        path = result.write_trajectory(tmp_path / "trajectory.csv")
        assert path.read_text(encoding="utf-8").splitlines()[0] == ",".join(TRAJECTORY_COLUMNS)

    def test_deterministic(self, tiny_dataset, tiny_settings):
        a = fit(tiny_dataset, tiny_settings)
        b = fit(tiny_dataset, tiny_settings)
        assert a.to_dicts() == b.to_dicts()
        np.testing.assert_array_equal(a.graph.numpy(), b.graph.numpy())

    def test_run_index_changes_stream(self, tiny_dataset, tiny_settings):
        a = fit(tiny_dataset, tiny_settings, run_index=0)
        b = fit(tiny_dataset, tiny_settings, run_index=1)
        assert not np.array_equal(a.graph.numpy(), b.graph.numpy())

    def test_requires_both_classes(self, tiny_dataset, tiny_settings):
        with pytest.raises(DataError):
            fit(tiny_dataset.by_label(0), tiny_settings)

    def test_penalty_non_decreasing_along_trajectory(self, tiny_dataset, tiny_settings):
        settings = tiny_settings.model_copy(update={"k_max": 4, "inner_epochs": 1})
        result = fit(tiny_dataset, settings)
        penalties = [row.c for row in result.trajectory]
        assert penalties == sorted(penalties)


class TestFitFixedGraph:
    def test_graph_untouched_and_schema(self, tiny_dataset, tiny_settings):
        a_fixed = tiny_dataset.correlation_matrix()
        result = fit_fixed_graph(tiny_dataset, a_fixed, tiny_settings, epochs=3)
        np.testing.assert_array_equal(result.graph.numpy(), a_fixed)
        assert result.reason == TerminationReason.EPOCH_BUDGET
        assert len(result.trajectory) == 3
        assert all(row.h is None and row.eta is None and row.c is None for row in result.trajectory)
        assert list(result.trajectory_frame().columns) == TRAJECTORY_COLUMNS

    def test_default_budget(self, tiny_dataset, tiny_settings):
        result = fit_fixed_graph(tiny_dataset, tiny_dataset.correlation_matrix(), tiny_settings)
        assert len(result.trajectory) == tiny_settings.inner_epochs * tiny_settings.k_max


# --- настольные приемочные прогоны ----------------------------------------------

# full: все гиперпараметры по умолчанию, окно T'=64 для когорты T=256;
# smoke: облегченная сеть и бюджет для быстрой проверки тех же свойств
BUDGETS = pytest.mark.parametrize(
    "budget",
    [
        dict(subsequence_length=64, hidden_channels=16, inner_epochs=20, k_max=20),
        dict(subsequence_length=64),
    ],
    ids=["smoke", "full"],
)


@pytest.fixture(scope="module")
def default_cohort():
    return generate_synthetic(SyntheticSpec())


@pytest.mark.slow
@BUDGETS
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_constrained_fit_reaches_dag(default_cohort, seed, budget):
    dataset, _ = default_cohort
    result = fit(dataset, build_config(seed=seed, **budget))
    assert result.final_h <= 1e-8
    assert result.reason == TerminationReason.CONVERGED
    dag = extract_dag(result.graph.numpy(), 0.015)
    assert len(topological_order(dag.adjacency)) == dataset.n_nodes


@pytest.mark.slow
@BUDGETS
def test_sparsity_responds_to_lambda(default_cohort, budget):
    dataset, _ = default_cohort
    norms, kept = [], []
    for l1_lambda in (1e-4, 1e-3, 1e-2):
        result = fit(dataset, build_config(seed=0, l1_lambda=l1_lambda, **budget))
        norms.append(float(np.abs(result.graph.numpy()).sum()))
        kept.append(extract_dag(result.graph.numpy(), 0.015).kept_count)
    assert norms[0] >= norms[1] >= norms[2]
    assert kept[0] >= kept[1] >= kept[2]


@pytest.mark.slow
@BUDGETS
def test_learned_graph_beats_correlation_graph(default_cohort, budget):
    dataset, _ = default_cohort
    settings = build_config(seed=0, **budget)
    learned = fit(dataset, settings)
    fixed = fit_fixed_graph(dataset, dataset.correlation_matrix(), settings, epochs=len(learned.trajectory))
    assert learned.final_cross_entropy < fixed.final_cross_entropy
