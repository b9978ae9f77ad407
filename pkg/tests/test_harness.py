"""
Tests del harness: configuración, checkpoints, métricas, corridas, gráficas, replay y CLI
"""

import os

import pandas as pd
import pytest
from numpy.testing import assert_array_equal

import main as cli
from agent.policy import init_policy
from agent.ppo import PPOConfig
from analysis.metrics import (METRIC_COLUMNS, MetricsRow, coverage_metric, read_metrics_csv,
                              seed_means, summarize_seeds, metrics_frame, write_metrics_csv)
from analysis.plots import build_figure, emit_plots
from core.errors import ConfigurationError, SchemaError, TrainingError, UsageError
from curiosity.bonus import Aggregation
from envs.tasks import TaskConfig, TaskKind, TVVariant
from harness import ablation as ablation_module
from harness import runner as runner_module
from harness.ablation import run_ablation, suite_settings
from harness.checkpoint import load_policy, load_rnetwork, save_policy, save_rnetwork
from harness.experiment_config import (ExperimentConfig, Method, apply_overrides, load_config,
                                       write_resolved_config)
from harness.replay import default_config_for, replay_trajectories
from harness.runner import ObservationReplay, run_experiment, train_rnet_only
from rnet.network import ComparatorKind, RNetConfig, init_rnetwork


def _tiny_config(output_dir, method=Method.PPO_EC, **changes):
    config = ExperimentConfig(
        method=method,
        task=TaskConfig(task=TaskKind.NO_REWARD, maze_width=7, maze_height=7, episode_length=40),
        rnet=RNetConfig(offline_budget=400, epochs=1, hidden=8, embedding_dim=4),
        ppo=PPOConfig(horizon=64, minibatch_size=32, epochs=1, hidden=8),
        total_budget=800,
        seeds=[0],
        output_dir=str(output_dir),
        name="tiny",
    )
    return config.replace(**changes) if changes else config


def _write(path, text):
    path.write_text(text, encoding="utf-8")
    return str(path)


def _rows(method, seed, count, start=0):
    return [MetricsRow(method=method, seed=seed, episode=i, env_step=(i + 1) * 40,
                       task_reward=0.0, coverage=start + i, goal_contacts=0,
                       mean_bonus=0.01 * i, insertions=i, tv_switch_fraction=0.0,
                       fire_fraction=0.2) for i in range(count)]


class TestExperimentConfig:
    def test_load_with_include_and_overrides(self, tmp_path):
        _write(tmp_path / "base.cfg", "# defaults\nseeds = 0, 1, 2\nbonus.alpha = 0.05\n"
                                      "rnet.k = 4\n")
        path = _write(tmp_path / "exp.cfg",
                      "include = base.cfg\nmethod = PPO+ICM\ntask.task = Sparse\n"
                      "task.tv_variant = NoiseAction\nbonus.alpha = 0.03  # gana\n"
                      "bonus.aggregation = kth_largest:10\nlog_bonus_steps = true\n"
                      "total_budget = 50_000\n")
        config = load_config(path)
        assert config.method == Method.PPO_ICM
        assert config.seeds == [0, 1, 2]
        assert config.bonus.alpha == 0.03
        assert config.bonus.aggregation == Aggregation.parse("kth_largest:10")
        assert config.rnet.k == 4
        assert config.task.task == TaskKind.SPARSE
        assert config.task.tv_variant == TVVariant.NOISE_ACTION
        assert config.log_bonus_steps is True
        assert config.total_budget == 50_000

    def test_include_is_relative_to_including_file(self, tmp_path):
        (tmp_path / "sub").mkdir()
        _write(tmp_path / "shared.cfg", "rnet.k = 7\n")
        path = _write(tmp_path / "sub" / "exp.cfg", "include = ../shared.cfg\n")
        assert load_config(path).rnet.k == 7

    def test_include_cycle_raises(self, tmp_path):
        _write(tmp_path / "a.cfg", "include = b.cfg\n")
        _write(tmp_path / "b.cfg", "include = a.cfg\n")
        with pytest.raises(ConfigurationError, match="cíclico"):
            load_config(str(tmp_path / "a.cfg"))

    @pytest.mark.parametrize("text", ["rnet.unknown = 1\n", "colour = blue\n",
                                      "optimizer.lr = 1\n", "task = Sparse\n"])
    def test_unknown_key_raises(self, text, tmp_path):
        with pytest.raises(ConfigurationError, match="Clave desconocida"):
            load_config(_write(tmp_path / "bad.cfg", text))

    @pytest.mark.parametrize("text", ["method = A2C\n", "rnet.k = five\n",
                                      "log_bonus_steps = maybe\n", "just a line\n",
                                      "bonus.aggregation = percentile:abc\n"])
    def test_malformed_values_raise(self, text, tmp_path):
        with pytest.raises(ConfigurationError):
            load_config(_write(tmp_path / "bad.cfg", text))

    def test_missing_file_raises(self, tmp_path):
        with pytest.raises(ConfigurationError):
            load_config(str(tmp_path / "nope.cfg"))

    def test_ec_needs_rnet_source(self):
        with pytest.raises(ConfigurationError):
            ExperimentConfig(method=Method.PPO_EC,
                             rnet=RNetConfig(offline_budget=0)).validate()
        with pytest.raises(ConfigurationError):
            ExperimentConfig(method=Method.PPO_EC, total_budget=1000,
                             rnet=RNetConfig(offline_budget=1000)).validate()
        ExperimentConfig(method=Method.PPO_EC,
                         rnet=RNetConfig(offline_budget=0, checkpoint="rnet.ckpt")).validate()

    def test_resolved_config_round_trip(self, tmp_path):
        config = _tiny_config(tmp_path, method=Method.PPO_GRID_ORACLE).replace(**{
            "bonus.aggregation": "max", "rnet.comparator": "dot_sigmoid",
            "rnet.shared_branches": False, "icm.bonus_scale": 0.123456789,
            "grid_cell_size": 2})
        path = write_resolved_config(config, str(tmp_path / "resolved.cfg"))
        assert load_config(path) == config

    def test_replace_accepts_dotted_keys(self):
        base = ExperimentConfig()
        changed = base.replace(**{"method": Method.PPO_ECO, "rnet.k": 3, "task.tv_images": 10})
        assert changed.method == Method.PPO_ECO
        assert changed.rnet.k == 3 and changed.task.tv_images == 10
        assert base.rnet.k == 5
        assert apply_overrides(base, {}) == base

    def test_method_uses_rnet(self):
        assert Method.PPO_EC.uses_rnet and Method.PPO_ECO.uses_rnet
        assert not Method.PPO_ICM.uses_rnet

    def test_shipped_configs_load(self):
        config_dir = os.path.join(os.path.dirname(os.path.dirname(__file__)), "configs")
        for name in sorted(os.listdir(config_dir)):
            if name.endswith(".cfg"):
                load_config(os.path.join(config_dir, name))


class TestCheckpoint:
    @pytest.mark.parametrize("shared,comparator", [(True, ComparatorKind.CONCAT_MLP),
                                                   (False, ComparatorKind.DOT_SIGMOID)])
    def test_rnetwork_is_bit_exact(self, shared, comparator, rng, tmp_path):
        config = RNetConfig(hidden=8, embedding_dim=4, shared_branches=shared,
                            comparator=comparator)
        rnet = init_rnetwork(10, config, rng)
        rnet.trained = True
        path = save_rnetwork(rnet, str(tmp_path / "rnet.ckpt"))
        loaded = load_rnetwork(path)
        assert loaded.shared == shared and loaded.comparator == comparator
        assert loaded.trained
        assert (loaded.branch_a is loaded.branch_b) == shared
        for a, b in zip(rnet.parameters(), loaded.parameters()):
            for x, y in zip(a.arrays(), b.arrays()):
                assert x.tobytes() == y.tobytes()

    def test_rnetwork_keeps_offline_steps(self, rng, tmp_path):
        rnet = init_rnetwork(10, RNetConfig(hidden=8, embedding_dim=4), rng)
        rnet.offline_steps = 1234
        loaded = load_rnetwork(save_rnetwork(rnet, str(tmp_path / "rnet.ckpt")))
        assert loaded.offline_steps == 1234

    def test_loaded_config_follows_checkpoint(self, rng, tmp_path):
        rnet = init_rnetwork(10, RNetConfig(hidden=8, shared_branches=False), rng)
        path = save_rnetwork(rnet, str(tmp_path / "rnet.ckpt"))
        loaded = load_rnetwork(path, RNetConfig(hidden=8, online_epochs=3))
        assert loaded.config.shared_branches is False
        assert loaded.config.online_epochs == 3

    def test_policy_is_bit_exact(self, rng, tmp_path):
        policy = init_policy(6, 4, rng, hidden=5)
        loaded = load_policy(save_policy(policy, str(tmp_path / "policy.ckpt")))
        for a, b in zip(policy.parameters(), loaded.parameters()):
            for x, y in zip(a.arrays(), b.arrays()):
                assert_array_equal(x, y)

    def test_bad_header_and_kind(self, rng, tmp_path):
        bad = _write(tmp_path / "bad.ckpt", "# something else\n{}\n")
        with pytest.raises(ConfigurationError):
            load_policy(bad)
        path = save_policy(init_policy(2, 2, rng), str(tmp_path / "policy.ckpt"))
        with pytest.raises(ConfigurationError):
            load_rnetwork(path)


class TestMetrics:
    @pytest.mark.parametrize("positions,cell_size,expected", [
        ([(3, 3)] * 20, 1, 1),
        ([(x, 1) for x in range(10)], 1, 10),
        ([(x, 1) for x in range(10)], 2, 5),
        ([(1, 1), (2, 1), (1, 1), (1, 2)], 1, 3),
    ])
    def test_coverage_metric(self, positions, cell_size, expected):
        assert coverage_metric(positions, cell_size) == expected

    def test_csv_round_trip_keeps_schema(self, tmp_path):
        path = write_metrics_csv(_rows("PPO", 0, 3), str(tmp_path / "metrics.csv"))
        with open(path, encoding="utf-8") as f:
            assert f.readline() == "# schema=metrics/v1\n"
        frame = read_metrics_csv(path)
        assert list(frame.columns) == METRIC_COLUMNS
        assert frame["coverage"].tolist() == [0, 1, 2]

    def test_missing_column_is_named(self, tmp_path):
        frame = metrics_frame(_rows("PPO", 0, 2)).drop(columns=["coverage"])
        path = tmp_path / "metrics.csv"
        path.write_text("# schema=metrics/v1\n" + frame.to_csv(index=False), encoding="utf-8")
        with pytest.raises(SchemaError, match="'coverage'"):
            read_metrics_csv(str(path))

    def test_wrong_header_raises(self, tmp_path):
        path = _write(tmp_path / "metrics.csv", "method,seed\nPPO,0\n")
        with pytest.raises(SchemaError):
            read_metrics_csv(path)

    def test_summary_final_window_and_aggregate(self):
        frame = metrics_frame(_rows("PPO+EC", 0, 10) + _rows("PPO+EC", 1, 10, start=10))
        summary = summarize_seeds(frame, fraction=0.1)
        per_seed = summary[summary["seed"] != "mean±std"]
        assert per_seed["coverage"].tolist() == [9.0, 19.0]
        assert_array_equal(seed_means(summary, "coverage"), [9.0, 19.0])
        aggregate = summary[summary["seed"] == "mean±std"].iloc[0]
        assert aggregate["coverage"] == "14.0000 ± 5.0000"
        assert aggregate["status"] == "2 ok"

    def test_failed_seed_excluded_from_aggregate(self):
        frame = metrics_frame(_rows("PPO", 0, 5))
        status = {("PPO", 0): {"status": "ok", "env_steps": 200},
                  ("PPO", 1): {"status": "failed", "error": "boom", "env_steps": 37}}
        summary = summarize_seeds(frame, status)
        failed = summary[summary["seed"] == "1"].iloc[0]
        assert failed["status"] == "failed" and failed["episodes"] == 0
        assert summary[summary["seed"] == "mean±std"].iloc[0]["status"] == "1 ok"


class TestObservationReplay:
    def test_fifo_across_episodes(self):
        replay = ObservationReplay(5)
        replay.start_episode()
        for i in range(3):
            replay.add([float(i)])
        replay.start_episode()
        for i in range(3, 7):
            replay.add([float(i)])
        trajectories = replay.trajectories()
        assert replay.size == 5
        assert [t[:, 0].tolist() for t in trajectories] == [[2.0], [3.0, 4.0, 5.0, 6.0]]


class TestRunExperiment:
    def test_ec_run_writes_outputs_and_respects_budget(self, tmp_path):
        config = _tiny_config(tmp_path / "run", log_bonus_steps=True, dump_trajectories=True)
        result = run_experiment(config, workers=1)
        for name in ("metrics.csv", "summary.csv", "timing.csv", "bonus_log.csv",
                     "trajectories.csv", "rnet_log.csv", "resolved_config.cfg"):
            assert os.path.exists(os.path.join(result.output_dir, name))
        assert os.path.exists(os.path.join(result.output_dir, "checkpoints",
                                           "rnet_ppo_ec_seed0.ckpt"))

        status = result.results[0].status
        assert status["status"] == "ok"
        assert status["env_steps"] == config.total_budget
        assert not status["truncated"]

        frame = read_metrics_csv(result.metrics_path)
        assert len(frame) == 10
        assert frame["env_step"].is_monotonic_increasing
        assert frame["insertions"].min() >= 1
        assert frame["rnet_accuracy"].notna().all()

        bonus = pd.read_csv(os.path.join(result.output_dir, "bonus_log.csv"))
        alpha, beta = config.bonus.alpha, config.bonus.beta
        assert bonus["bonus"].between(alpha * (beta - 1.0), alpha * beta).all()
        assert bonus["memory_size"].max() <= config.bonus.capacity

    def test_checkpoint_run_reports_pretrained_steps(self, tmp_path):
        source = _tiny_config(tmp_path / "source")
        path, _ = train_rnet_only(source)
        config = _tiny_config(tmp_path / "reuse", **{"rnet.checkpoint": path,
                                                     "rnet.offline_budget": 0})
        result = run_experiment(config, workers=1)
        status = result.results[0].status
        assert status["pretrained_env_steps"] == source.rnet.offline_budget
        assert status["env_steps"] == config.total_budget
        summary = pd.read_csv(os.path.join(result.output_dir, "summary.csv"))
        per_seed = summary[summary["seed"].astype(str) == "0"].iloc[0]
        assert int(per_seed["pretrained_env_steps"]) == source.rnet.offline_budget

    def test_fresh_offline_phase_has_no_pretrained_steps(self, tmp_path):
        result = run_experiment(_tiny_config(tmp_path), workers=1)
        assert result.results[0].status["pretrained_env_steps"] == 0

    def test_identical_config_gives_identical_csv(self, tmp_path):
        first = run_experiment(_tiny_config(tmp_path / "a"), workers=1)
        second = run_experiment(_tiny_config(tmp_path / "b"), workers=1)
        for name in ("metrics.csv", "summary.csv"):
            with open(os.path.join(first.output_dir, name), "rb") as f:
                a = f.read()
            with open(os.path.join(second.output_dir, name), "rb") as f:
                b = f.read()
            assert a == b

    def test_plain_ppo_has_no_bonus(self, tmp_path):
        config = _tiny_config(tmp_path, method=Method.PPO, total_budget=300)
        result = run_experiment(config, workers=1)
        frame = read_metrics_csv(result.metrics_path)
        assert (frame["mean_bonus"] == 0.0).all()
        assert (frame["insertions"] == 0).all()
        assert frame["rnet_accuracy"].isna().all()
        assert result.results[0].status["truncated"]

    def test_grid_oracle_bonus_matches_coverage(self, tmp_path):
        config = _tiny_config(tmp_path, method=Method.PPO_GRID_ORACLE, total_budget=200)
        result = run_experiment(config, workers=1)
        for row in result.results[0].rows:
            paid = row.mean_bonus * config.task.episode_length
            assert paid == pytest.approx(config.grid_weight * (row.coverage - 1))

    def test_icm_and_eco_runs(self, tmp_path):
        icm = run_experiment(_tiny_config(tmp_path / "icm", method=Method.PPO_ICM,
                                          total_budget=200), workers=1)
        assert icm.results[0].status["status"] == "ok"
        eco = run_experiment(_tiny_config(tmp_path / "eco", method=Method.PPO_ECO,
                                          total_budget=400, **{"rnet.retrain_every": 200,
                                                               "rnet.replay_size": 400}),
                             workers=1)
        assert eco.results[0].status["env_steps"] == 400
        log = pd.read_csv(os.path.join(eco.output_dir, "rnet_log.csv"))
        assert set(log["phase"]) == {"online"}
        assert sorted(set(log["env_step"])) == [200, 400]

    def test_failed_seed_does_not_stop_others(self, tmp_path, monkeypatch):
        original = runner_module.SeedRun.run_policy_phase

        def failing(self):
            if self.seed == 1:
                raise TrainingError("gradiente no finito", diagnostics={"seed": 1})
            return original(self)

        monkeypatch.setattr(runner_module.SeedRun, "run_policy_phase", failing)
        config = _tiny_config(tmp_path, method=Method.PPO, total_budget=120, seeds=[0, 1])
        result = run_experiment(config, workers=1)
        statuses = {r.seed: r.status["status"] for r in result.results}
        assert statuses == {0: "ok", 1: "failed"}
        assert "gradiente no finito" in result.results[1].status["error"]

    def test_seed_results_are_order_independent(self, tmp_path):
        both = run_experiment(_tiny_config(tmp_path / "both", method=Method.PPO,
                                           total_budget=120, seeds=[1, 0]), workers=1)
        alone = run_experiment(_tiny_config(tmp_path / "alone", method=Method.PPO,
                                            total_budget=120, seeds=[1]), workers=1)
        assert [r.seed for r in both.results] == [0, 1]

        def key(rows):
            return [(r.episode, r.env_step, r.coverage, r.fire_fraction) for r in rows]

        assert key(both.results[1].rows) == key(alone.results[0].rows)


class TestReplay:
    def test_recorded_trajectories_replay_exactly(self, tmp_path):
        config = _tiny_config(tmp_path, method=Method.PPO, total_budget=150,
                              dump_trajectories=True)
        result = run_experiment(config, workers=1)
        path = os.path.join(result.output_dir, "trajectories.csv")
        replays = replay_trajectories(path, config.task)
        assert replays and not any(r.diverged for r in replays)
        coverage = {row.episode: row.coverage for row in result.results[0].rows}
        for r in replays:
            if r.episode in coverage:
                assert r.coverage == coverage[r.episode]

    def test_tampered_trajectory_diverges(self, tmp_path):
        config = _tiny_config(tmp_path, method=Method.PPO, total_budget=80,
                              dump_trajectories=True)
        result = run_experiment(config, workers=1)
        path = os.path.join(result.output_dir, "trajectories.csv")
        with open(path, encoding="utf-8") as f:
            header = f.readline()
        frame = pd.read_csv(path, skiprows=1)
        frame.loc[5, "x"] = -1
        with open(path, "w", encoding="utf-8") as f:
            f.write(header + frame.to_csv(index=False))
        replays = replay_trajectories(path, config.task)
        assert replays[0].diverged and replays[0].first_divergence == 5

    def test_wrong_schema_raises(self, tmp_path):
        with pytest.raises(SchemaError):
            replay_trajectories(_write(tmp_path / "t.csv", "method,seed\n"), TaskConfig())


class TestPlots:
    def test_legend_matches_methods(self):
        frame = metrics_frame(_rows("PPO", 0, 6) + _rows("PPO+EC", 0, 6))
        fig = build_figure(frame, "coverage", bins=4)
        labels = [t.get_text() for t in fig.axes[0].get_legend().get_texts()]
        assert labels == ["PPO", "PPO+EC"]

    def test_shading_only_with_several_seeds(self):
        single = build_figure(metrics_frame(_rows("PPO", 0, 6)), "coverage", bins=4)
        assert len(single.axes[0].collections) == 0
        several = build_figure(metrics_frame(_rows("PPO", 0, 6) + _rows("PPO", 1, 6)),
                               "coverage", bins=4)
        assert len(several.axes[0].collections) == 1

    def test_emit_is_deterministic(self, tmp_path):
        csv = write_metrics_csv(_rows("PPO", 0, 8) + _rows("PPO+EC", 1, 8),
                                str(tmp_path / "metrics.csv"))
        first = emit_plots([csv], str(tmp_path / "a.svg"), metrics=["coverage"])
        second = emit_plots([csv], str(tmp_path / "b.svg"), metrics=["coverage"])
        with open(first[0], "rb") as f:
            a = f.read()
        with open(second[0], "rb") as f:
            b = f.read()
        assert a == b

    def test_one_file_per_metric(self, tmp_path):
        csv = write_metrics_csv(_rows("PPO", 0, 8), str(tmp_path / "metrics.csv"))
        paths = emit_plots([csv], str(tmp_path / "curves.svg"))
        assert paths == [str(tmp_path / "curves_coverage.svg"),
                         str(tmp_path / "curves_task_reward.svg")]
        assert all(os.path.exists(p) for p in paths)

    @pytest.mark.parametrize("metrics", [[], ["elapsed"]])
    def test_bad_metric_selection_lists_columns(self, metrics, tmp_path):
        csv = write_metrics_csv(_rows("PPO", 0, 3), str(tmp_path / "metrics.csv"))
        with pytest.raises(SchemaError, match="coverage"):
            emit_plots([csv], str(tmp_path / "x.svg"), metrics=metrics)


class TestAblation:
    def test_unknown_suite_lists_suites(self):
        with pytest.raises(UsageError, match="threshold_k"):
            suite_settings("dropout", ExperimentConfig())

    def test_threshold_and_memory_rows(self):
        base = ExperimentConfig()
        thresholds = suite_settings("threshold_k", base)
        assert [name for name, _ in thresholds] == ["k=2", "k=3", "k=4", "k=5", "k=7", "k=10"]
        assert [cfg.rnet.k for _, cfg in thresholds] == [2, 3, 4, 5, 7, 10]
        memory = suite_settings("memory_size", base)
        assert [cfg.bonus.capacity for _, cfg in memory] == [100, 200, 350, 500]

    def test_random_embedding_methods(self):
        settings = dict(suite_settings("random_embedding", ExperimentConfig()))
        assert list(settings) == ["full_ec", "random_embedding", "no_comparator", "ppo"]
        assert not settings["random_embedding"].rnet.train_embedding
        no_comparator = settings["no_comparator"].rnet
        assert no_comparator.comparator == ComparatorKind.DOT_SIGMOID
        assert no_comparator.shared_branches and not no_comparator.train_embedding
        assert settings["ppo"].method == Method.PPO

    def test_randomized_tv_grid(self):
        settings = suite_settings("randomized_tv", ExperimentConfig())
        assert len(settings) == 6 * 4
        assert all(cfg.task.task == TaskKind.SPARSE for _, cfg in settings)

    def test_run_ablation_writes_table(self, tmp_path, monkeypatch):
        def fake_run(config, logger=None, workers=None):
            summary = summarize_seeds(metrics_frame(_rows(config.method.value, 0, 4)))
            return runner_module.ExperimentResult(config.output_dir, "", "", summary, [])

        monkeypatch.setattr(ablation_module, "run_experiment", fake_run)
        base = ExperimentConfig(output_dir=str(tmp_path))
        path, table = run_ablation("branch_sharing", base)
        assert os.path.basename(path) == "ablation_branch_sharing.csv"
        assert list(table.columns[:2]) == ["suite", "setting"]
        assert set(table["setting"]) == {"shared", "unshared"}


class TestCommandLine:
    def _config_file(self, tmp_path, extra=""):
        return _write(tmp_path / "exp.cfg",
                      f"method = PPO\ntask.task = NoReward\ntask.maze_width = 7\n"
                      f"task.maze_height = 7\ntask.episode_length = 30\ntotal_budget = 90\n"
                      f"seeds = 0\nppo.horizon = 32\nppo.hidden = 8\n"
                      f"output_dir = {tmp_path / 'out'}\n{extra}")

    def _error_line(self, capsys):
        err = capsys.readouterr().err.strip().splitlines()
        return [line for line in err if line.startswith("ERROR ")][-1]

    def test_run_succeeds(self, tmp_path, capsys):
        code = cli.main(["--log-level", "ERROR", "run", self._config_file(tmp_path)])
        assert code == 0
        assert "metrics.csv" in capsys.readouterr().out

    def test_configuration_error_exits_2(self, tmp_path, capsys):
        code = cli.main(["--log-level", "ERROR", "run", str(tmp_path / "missing.cfg")])
        assert code == 2
        assert self._error_line(capsys).startswith('ERROR type=ConfigurationError message="')

    def test_non_integer_aggregation_exits_2(self, tmp_path, capsys):
        path = self._config_file(tmp_path, "bonus.aggregation = percentile:abc\n")
        assert cli.main(["--log-level", "ERROR", "run", path]) == 2
        assert "type=ConfigurationError" in self._error_line(capsys)

    def test_unknown_suite_exits_2(self, tmp_path, capsys):
        code = cli.main(["--log-level", "ERROR", "ablate", "dropout",
                         self._config_file(tmp_path)])
        assert code == 2
        assert "type=UsageError" in self._error_line(capsys)

    def test_plot_unknown_metric_exits_2(self, tmp_path, capsys):
        csv = write_metrics_csv(_rows("PPO", 0, 3), str(tmp_path / "metrics.csv"))
        code = cli.main(["--log-level", "ERROR", "plot", csv, "-o", str(tmp_path / "x.svg"),
                         "--metrics", "elapsed"])
        assert code == 2
        assert "type=SchemaError" in self._error_line(capsys)

    def test_replay_reports_divergence(self, tmp_path, capsys):
        cli.main(["--log-level", "ERROR", "run",
                  self._config_file(tmp_path, "dump_trajectories = true\n")])
        path = str(tmp_path / "out" / "trajectories.csv")
        assert cli.main(["--log-level", "ERROR", "replay", path]) == 0
        assert "DIVERGE" not in capsys.readouterr().out

        with open(path, encoding="utf-8") as f:
            header = f.readline()
        frame = pd.read_csv(path, skiprows=1)
        frame.loc[3, "x"] = -1
        with open(path, "w", encoding="utf-8") as f:
            f.write(header + frame.to_csv(index=False))
        assert cli.main(["--log-level", "ERROR", "replay", path]) == 1
        assert "DIVERGE" in capsys.readouterr().out

    def test_error_line_is_machine_readable(self):
        line = cli.error_line(ConfigurationError('clave "rara"'))
        assert line == 'ERROR type=ConfigurationError message="clave \\"rara\\""'

    def test_replay_finds_resolved_config(self, tmp_path):
        cli.main(["--log-level", "ERROR", "run",
                  self._config_file(tmp_path, "dump_trajectories = true\n")])
        path = str(tmp_path / "out" / "trajectories.csv")
        resolved = default_config_for(path)
        assert resolved == str(tmp_path / "out" / "resolved_config.cfg")
        assert load_config(resolved).task.maze_width == 7
