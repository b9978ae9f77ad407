"""
Tests de la red de alcanzabilidad: minado de pares, red siamesa y entrenamiento
"""

import io
import itertools

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from config import GRADIENT_CHECK_TOLERANCE
from core.errors import ConfigurationError, TrainingError, UsageError
from core.gradcheck import finite_diff_check
from core.losses import sigmoid
from rnet import trainer as trainer_module
from rnet.network import (ComparatorKind, RNetConfig, compare, compare_many,
                          comparator_logits, embed, init_rnetwork, pair_logits)
from rnet.pairs import PairDataset, label_pair, mine_pairs, split_pairs
from rnet.trainer import (RNetworkTrainer, pair_loss_and_grads, train_rnetwork,
                          validation_accuracy)
from utils.logger import WorkbenchLogger


def _indexed_trajectories(lengths):
    """Observaciones [traj_id, t] para poder verificar cada par minado"""
    return [np.stack([[float(tid), float(t)] for t in range(length)])
            for tid, length in enumerate(lengths)]


def _separable_pairs(rng, n=2000, dim=4):
    first = rng.normal(size=(n, dim))
    second = rng.normal(size=(n, dim))
    labels = rng.integers(0, 2, size=n)
    first[:, 0] = np.where(labels == 1, 1.0, -1.0) * (0.5 + np.abs(first[:, 0]))
    return PairDataset(first=first, second=second, labels=labels, k=5, gap_multiplier=2.0)


def _small_config(**changes):
    base = dict(embedding_dim=3, hidden=6, batch_size=64, epochs=2)
    base.update(changes)
    return RNetConfig(**base)


class TestLabelPair:
    @pytest.mark.parametrize("i,j,expected", [
        (10, 13, 1),
        (13, 10, 1),
        (10, 21, 0),
        (10, 17, None),
        (10, 15, 1),
        (10, 20, None),
        (4, 4, None),
    ])
    def test_examples(self, i, j, expected):
        assert label_pair(i, j, 5, 2.0) == expected

    @pytest.mark.parametrize("k,gap", [(1, 1.5), (2, 2.0), (5, 2.0), (3, 3.0), (7, 1.2)])
    def test_exhaustive_partition(self, k, gap):
        for i, j in itertools.product(range(40), repeat=2):
            delta = abs(i - j)
            label = label_pair(i, j, k, gap)
            if 0 < delta <= k:
                assert label == 1
            elif delta > gap * k:
                assert label == 0
            else:
                assert label is None
            assert label == label_pair(j, i, k, gap)


class TestMinePairs:
    def test_pairs_are_balanced_and_consistent(self, rng):
        dataset = mine_pairs(_indexed_trajectories([40, 60, 30]), 5, 2.0, 200, rng)
        assert len(dataset) > 0
        assert dataset.labels.sum() * 2 == len(dataset)
        assert_array_equal(dataset.first[:, 0], dataset.second[:, 0])
        for a, b, label in zip(dataset.first, dataset.second, dataset.labels):
            assert label_pair(a[1], b[1], 5, 2.0) == label
        assert_array_equal(dataset.trajectory_ids, dataset.first[:, 0].astype(int))

    def test_both_orders_appear(self, rng):
        dataset = mine_pairs(_indexed_trajectories([50]), 5, 2.0, 400, rng)
        forward = dataset.second[:, 1] > dataset.first[:, 1]
        assert forward.any() and (~forward).any()

    def test_short_trajectories_skipped_with_warning(self, rng):
        stream = io.StringIO()
        logger = WorkbenchLogger(level="WARNING", log_to_file=False, stream=stream)
        dataset = mine_pairs(_indexed_trajectories([40, 11, 5]), 5, 2.0, 100, rng, logger=logger)
        assert dataset.meta["skipped_trajectories"] == 2
        assert set(dataset.trajectory_ids.tolist()) == {0}
        assert any(level == "WARNING" for level, _ in logger.records)

    def test_all_short_raises(self, rng):
        with pytest.raises(UsageError):
            mine_pairs(_indexed_trajectories([5, 8]), 5, 2.0, 100, rng)

    @pytest.mark.parametrize("k,gap", [(0, 2.0), (5, 1.0), (5, 0.5)])
    def test_invalid_thresholds(self, k, gap, rng):
        with pytest.raises(ConfigurationError):
            mine_pairs(_indexed_trajectories([40]), k, gap, 10, rng)

    def test_split_is_stratified_and_disjoint(self, rng):
        dataset = mine_pairs(_indexed_trajectories([60] * 10), 5, 2.0, 200, rng)
        train, validation = split_pairs(dataset, rng)
        assert len(train) + len(validation) == len(dataset)
        assert validation.split == "validation"
        assert abs(validation.positive_fraction() - 0.5) < 0.05
        assert abs(train.positive_fraction() - 0.5) < 0.05


class TestRNetwork:
    def test_dot_sigmoid_orthogonal(self, rng):
        rnet = init_rnetwork(4, _small_config(comparator=ComparatorKind.DOT_SIGMOID), rng)
        assert compare(rnet, [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]) == pytest.approx(0.5)

    def test_dot_sigmoid_self_similarity(self, rng):
        rnet = init_rnetwork(4, _small_config(comparator=ComparatorKind.DOT_SIGMOID), rng)
        e = np.ones(3)
        assert compare(rnet, e, e) == pytest.approx(sigmoid(3.0))

    def test_same_observation_same_embedding(self, rng):
        rnet = init_rnetwork(8, _small_config(), rng)
        obs = rng.normal(size=8)
        assert_array_equal(embed(rnet, obs), embed(rnet, obs.copy()))

    def test_zero_network_zero_embedding(self, rng):
        rnet = init_rnetwork(8, _small_config(), rng)
        for array in rnet.branch_a.arrays():
            array[...] = 0.0
        assert_array_equal(embed(rnet, np.zeros(8)), np.zeros(3))

    def test_unshared_embedding_has_two_rows(self, rng):
        shared = init_rnetwork(8, _small_config(), rng)
        unshared = init_rnetwork(8, _small_config(shared_branches=False), rng)
        assert embed(shared, np.ones(8)).shape == (3,)
        assert embed(unshared, np.ones(8)).shape == (2, 3)
        assert shared.branch_a is shared.branch_b
        assert unshared.branch_a is not unshared.branch_b

    def test_observation_is_flattened(self, rng):
        rnet = init_rnetwork(2 * 3 * 3, _small_config(), rng)
        obs = rng.normal(size=(2, 3, 3))
        assert_array_equal(embed(rnet, obs), embed(rnet, obs.reshape(-1)))

    def test_shape_mismatch_raises(self, rng):
        rnet = init_rnetwork(8, _small_config(), rng)
        with pytest.raises(ConfigurationError):
            embed(rnet, np.ones(7))
        with pytest.raises(ConfigurationError):
            compare(rnet, np.ones(4), np.ones(3))

    def test_compare_many_matches_pairwise(self, rng):
        rnet = init_rnetwork(8, _small_config(shared_branches=False), rng)
        memory = np.stack([embed(rnet, rng.normal(size=8)) for _ in range(5)])
        e = embed(rnet, rng.normal(size=8))
        many = compare_many(rnet, memory, e)
        first, second = memory[:, 0, :], np.broadcast_to(e[1], (5, 3))
        logits, _ = comparator_logits(rnet, first, np.ascontiguousarray(second))
        assert_allclose(many, sigmoid(logits))
        assert np.all((many > 0) & (many < 1))

    @pytest.mark.parametrize("shared,comparator", [
        (True, ComparatorKind.CONCAT_MLP),
        (False, ComparatorKind.CONCAT_MLP),
        (True, ComparatorKind.DOT_SIGMOID),
        (False, ComparatorKind.DOT_SIGMOID),
    ])
    def test_trainable_parameters(self, shared, comparator, rng):
        rnet = init_rnetwork(8, _small_config(shared_branches=shared, comparator=comparator), rng)
        expected = (1 if shared else 2) + (1 if comparator == ComparatorKind.CONCAT_MLP else 0)
        assert len(rnet.trainable_parameters()) == expected

    def test_frozen_embedding_with_dot_product_trains_nothing(self, rng):
        config = _small_config(comparator=ComparatorKind.DOT_SIGMOID, train_embedding=False)
        assert init_rnetwork(8, config, rng).trainable_parameters() == []

    @pytest.mark.parametrize("shared,comparator", [
        (True, ComparatorKind.CONCAT_MLP),
        (False, ComparatorKind.CONCAT_MLP),
        (True, ComparatorKind.DOT_SIGMOID),
        (False, ComparatorKind.DOT_SIGMOID),
    ])
    @pytest.mark.parametrize("seed", range(10))
    def test_pair_gradients_match_finite_differences(self, shared, comparator, seed):
        config = _small_config(shared_branches=shared, comparator=comparator)
        for offset in range(100):
            rng = np.random.default_rng(1000 * seed + offset)
            rnet = init_rnetwork(5, config, rng)
            first, second = rng.normal(size=(4, 5)), rng.normal(size=(4, 5))
            labels = np.array([1, 0, 1, 0])
            _, (_, _, cache_a, cache_b, cache_c) = pair_logits(rnet, first, second)
            hidden = cache_a.pre_activations[:-1] + cache_b.pre_activations[:-1]
            if cache_c is not None:
                hidden += cache_c.pre_activations[:-1]
            if all(np.min(np.abs(z)) > 1e-3 for z in hidden):
                break

        def loss_fn(params, inputs):
            return pair_loss_and_grads(rnet, *inputs)

        error = finite_diff_check(rnet.trainable_parameters(), (first, second, labels), loss_fn)
        assert error <= GRADIENT_CHECK_TOLERANCE


class TestTraining:
    def test_separable_pairs_reach_high_accuracy(self, rng):
        dataset = _separable_pairs(rng)
        train, validation = split_pairs(dataset, rng)
        config = RNetConfig(embedding_dim=4, hidden=16, learning_rate=1e-2, epochs=30)
        rnet, log = train_rnetwork(train, config, rng, validation=validation)
        assert rnet.trained
        assert len(log) == 30
        assert log[-1]["validation_accuracy"] >= 0.99
        assert log[-1]["train_loss"] < log[0]["train_loss"]

    def test_moving_average_loss_does_not_increase(self, rng):
        train = _separable_pairs(rng)
        config = RNetConfig(embedding_dim=4, hidden=16, learning_rate=3e-3)
        log = RNetworkTrainer(init_rnetwork(4, config, rng), config).fit(train, None, 25, rng)
        losses = np.array([row["train_loss"] for row in log])
        rolling = np.convolve(losses, np.ones(5) / 5, mode="valid")
        assert np.all(np.diff(rolling) <= 1e-2)
        assert rolling[-1] < rolling[0]

    def test_shuffled_labels_stay_at_chance(self, rng):
        train = _separable_pairs(rng, n=1000)
        train.labels = rng.permutation(train.labels)
        validation = _separable_pairs(rng, n=4000)
        validation.labels = rng.integers(0, 2, size=4000)
        config = RNetConfig(embedding_dim=4, hidden=16, learning_rate=1e-3, epochs=3)
        _, log = train_rnetwork(train, config, rng, validation=validation)
        assert abs(log[-1]["validation_accuracy"] - 0.5) <= 0.05

    def test_constant_network_predicts_reachable(self, rng):
        config = _small_config(comparator=ComparatorKind.DOT_SIGMOID)
        rnet = init_rnetwork(4, config, rng)
        for array in rnet.branch_a.arrays():
            array[...] = 0.0
        dataset = PairDataset(first=rng.normal(size=(4, 4)), second=rng.normal(size=(4, 4)),
                              labels=np.array([1, 1, 1, 0]), k=5, gap_multiplier=2.0)
        assert validation_accuracy(rnet, dataset) == pytest.approx(0.75)

    def test_empty_validation_raises(self, rng):
        rnet = init_rnetwork(4, _small_config(), rng)
        empty = PairDataset(first=np.zeros((0, 4)), second=np.zeros((0, 4)),
                            labels=np.zeros(0, dtype=np.int64), k=5, gap_multiplier=2.0)
        with pytest.raises(UsageError):
            validation_accuracy(rnet, empty)

    def test_train_without_validation_splits(self, rng):
        dataset = _separable_pairs(rng, n=400)
        rnet, log = train_rnetwork(dataset, _small_config(), rng)
        assert len(log) == 2
        assert 0.0 <= log[-1]["validation_accuracy"] <= 1.0
        assert rnet.input_dim == 4

    def test_nothing_to_train_keeps_parameters(self, rng):
        config = _small_config(comparator=ComparatorKind.DOT_SIGMOID, train_embedding=False)
        rnet = init_rnetwork(4, config, rng)
        before = [a.copy() for a in rnet.branch_a.arrays()]
        dataset = _separable_pairs(rng, n=200)
        trainer = RNetworkTrainer(rnet, config)
        trainer.fit(dataset, None, 2, rng)
        assert trainer.adam is None
        assert rnet.trained
        for a, b in zip(rnet.branch_a.arrays(), before):
            assert_array_equal(a, b)

    def test_adam_state_persists_between_fits(self, rng):
        config = _small_config()
        rnet = init_rnetwork(4, config, rng)
        trainer = RNetworkTrainer(rnet, config)
        dataset = _separable_pairs(rng, n=128)
        trainer.fit(dataset, None, 1, rng)
        steps = trainer.adam.step
        log = trainer.fit(dataset, None, 1, rng)
        assert trainer.adam.step == 2 * steps
        assert log[0]["epoch"] == 2

    def test_divergence_raises(self, rng, monkeypatch):
        losses = iter([1.0, 50.0])
        original = trainer_module.pair_loss_and_grads

        def scripted(rnet, first, second, labels):
            _, grads = original(rnet, first, second, labels)
            return next(losses), grads

        monkeypatch.setattr(trainer_module, "pair_loss_and_grads", scripted)
        config = _small_config(batch_size=1000)
        rnet = init_rnetwork(4, config, rng)
        with pytest.raises(TrainingError) as info:
            RNetworkTrainer(rnet, config).fit(_separable_pairs(rng, n=100), None, 2, rng)
        assert info.value.diagnostics["initial_loss"] == 1.0

    def test_non_finite_loss_raises(self, rng, monkeypatch):
        monkeypatch.setattr(trainer_module, "pair_loss_and_grads",
                            lambda rnet, first, second, labels: (float("nan"), []))
        config = _small_config()
        rnet = init_rnetwork(4, config, rng)
        with pytest.raises(TrainingError):
            RNetworkTrainer(rnet, config).fit(_separable_pairs(rng, n=100), None, 1, rng)

    @pytest.mark.slow
    def test_maze_trajectories_reach_desk_accuracy(self):
        from envs.tasks import TaskConfig
        from harness.runner import collect_random_trajectories

        streams = [np.random.default_rng(s) for s in (0, 1, 2)]
        trajectories, _ = collect_random_trajectories(TaskConfig(), 100_000, streams[0],
                                                      streams[1])
        config = RNetConfig()
        dataset = mine_pairs(trajectories, config.k, config.gap_multiplier,
                             config.pairs_per_episode, streams[2])
        _, log = train_rnetwork(dataset, config, streams[2])
        assert log[-1]["validation_accuracy"] >= 0.85
