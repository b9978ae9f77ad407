"""
╔══════════════════════════════════════════════════════════════════════════╗
║                    EJECUTOR DE EXPERIMENTOS v1.0                         ║
║                                                                          ║
║  Por semilla:                                                            ║
║    PPO+EC   → datos con política aleatoria → R-network → PPO con bonus  ║
║    PPO+ECO  → R-network re-entrenada cada N pasos desde un replay FIFO  ║
║    PPO+ICM / PPO+GridOracle / PPO → mismo bucle, otra fuente de bonus   ║
║  Presupuesto total de env steps incluye la recolección de la R-network  ║
║  TrainingError → semilla marcada como fallida, el resto continúa        ║
║  Semillas en paralelo (WORKBENCH_WORKERS), merge ordenado por semilla   ║
╚══════════════════════════════════════════════════════════════════════════╝
"""

import os
import time
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from config import LOG_EVERY_N_UPDATES
from core.errors import TrainingError, UsageError
from envs.maze_env import MazeEnvironment, oracle_position
from envs.tasks import Action
from rnet.pairs import mine_pairs, split_pairs
from rnet.network import init_rnetwork
from rnet.trainer import RNetworkTrainer
from curiosity.episodic import EpisodicCuriosity
from baselines.icm import init_icm, icm_train_step, icm_bonus
from baselines.grid_oracle import GridOracleState, grid_oracle_bonus, grid_oracle_reset
from agent.policy import init_policy, policy_act, policy_forward
from agent.rollout import RolloutBuffer
from agent.ppo import ppo_update
from analysis.metrics import (MetricsRow, coverage_metric, metrics_frame, write_csv,
                              write_metrics_csv, summarize_seeds)
from harness.experiment_config import Method, write_resolved_config
from harness.checkpoint import save_rnetwork, load_rnetwork, save_policy
from utils.helpers import seed_streams, worker_slots, ensure_dir, format_elapsed

STREAM_NAMES = ["env", "policy", "rnet", "memory", "icm"]

BONUS_LOG_COLUMNS = ["method", "seed", "step", "score", "bonus", "inserted", "memory_size"]
TRAJECTORY_COLUMNS = ["method", "seed", "episode", "episode_seed", "step", "action", "x", "y"]
RNET_LOG_COLUMNS = ["method", "seed", "phase", "env_step", "epoch", "train_loss",
                    "validation_accuracy"]
TIMING_COLUMNS = ["method", "seed", "phase", "seconds"]


@dataclass
class SeedResult:
    """Todo lo que produce una semilla (picklable para el pool de procesos)"""
    method: str
    seed: int
    rows: list = field(default_factory=list)
    status: dict = field(default_factory=dict)
    bonus_log: list = field(default_factory=list)
    trajectories: list = field(default_factory=list)
    rnet_log: list = field(default_factory=list)
    timing: list = field(default_factory=list)


@dataclass
class ExperimentResult:
    output_dir: str
    metrics_path: str
    summary_path: str
    summary: object
    results: list


class ObservationReplay:
    """Replay FIFO de observaciones agrupadas por episodio (pares nunca cruzan episodios)"""

    def __init__(self, capacity):
        self.capacity = int(capacity)
        self.episodes = deque()
        self.size = 0

    def start_episode(self):
        self.episodes.append([])

    def add(self, obs):
        if not self.episodes:
            self.start_episode()
        self.episodes[-1].append(np.asarray(obs, dtype=np.float64))
        self.size += 1
        while self.size > self.capacity:
            oldest = self.episodes[0]
            oldest.pop(0)
            self.size -= 1
            if not oldest:
                self.episodes.popleft()

    def trajectories(self):
        return [np.stack(ep) for ep in self.episodes if ep]


def _rnet_log_rows(method, seed, phase, env_step, log):
    return [{"method": method, "seed": seed, "phase": phase, "env_step": env_step,
             "epoch": row["epoch"], "train_loss": row["train_loss"],
             "validation_accuracy": row["validation_accuracy"]} for row in log]


def collect_random_trajectories(task, budget, rng_env, rng_actions):
    """
    Trayectorias de política uniforme aleatoria

    Returns:
        tuple: (lista de arrays (T, C, V, V), env steps consumidos)
    """
    env = MazeEnvironment(task, allow_position_access=False)
    trajectories, steps = [], 0
    while steps < budget:
        obs = env.reset(int(rng_env.integers(0, 2**31 - 1)))
        episode = [obs]
        done = False
        while not done and steps < budget:
            obs, _, done = env.step(int(rng_actions.integers(0, env.action_count)))
            episode.append(obs)
            steps += 1
        trajectories.append(np.stack(episode))
    return trajectories, steps


def train_offline_rnet(config, streams, budget, logger=None):
    """
    Fase offline: recolección aleatoria + entrenamiento

    Returns:
        tuple: (RNetwork, log por época, env steps consumidos)
    """
    rcfg = config.rnet
    trajectories, steps = collect_random_trajectories(config.task, budget, streams["env"],
                                                      streams["rnet"])
    dataset = mine_pairs(trajectories, rcfg.k, rcfg.gap_multiplier, rcfg.pairs_per_episode,
                         streams["rnet"], logger=logger)
    train, validation = split_pairs(dataset, streams["rnet"])
    rnet = init_rnetwork(dataset.input_dim, rcfg, streams["rnet"])
    log = RNetworkTrainer(rnet, rcfg, logger=logger).fit(train, validation, rcfg.epochs,
                                                         streams["rnet"])
    rnet.offline_steps = int(steps)
    if logger:
        logger.success(f"R-network offline: {len(dataset)} pares, {steps} env steps, "
                       f"val_acc={log[-1]['validation_accuracy']:.3f}")
    return rnet, log, steps


class SeedRun:
    """Estado de una semilla durante la fase de política"""

    def __init__(self, config, seed, logger=None):
        self.config = config
        self.seed = int(seed)
        self.logger = logger
        self.method = config.method
        self.streams = seed_streams(seed, STREAM_NAMES)
        self.result = SeedResult(method=config.method.value, seed=self.seed)

        self.env = MazeEnvironment(config.task,
                                   allow_position_access=self.method == Method.PPO_GRID_ORACLE)
        self.action_kinds = config.task.action_set()
        self.input_dim = int(np.prod(self.env.observation_shape))

        self.env_steps = 0
        self.pretrained_env_steps = 0
        self.truncated = False
        self.episode = 0
        self.updates = 0
        self.current = None
        self.rnet = None
        self.rnet_accuracy = float("nan")
        self.curiosity = None
        self.rnet_trainer = None
        self.replay = None
        self.icm = None
        self.grid = None

    def send_log(self, message):
        """Envía mensaje al log"""
        if self.logger:
            self.logger.info(message)

    # ------------------------------------------------------------------
    # Preparación de la fuente de bonus
    # ------------------------------------------------------------------

    def prepare(self):
        cfg = self.config
        if self.method == Method.PPO_EC:
            started = time.perf_counter()
            if cfg.rnet.checkpoint:
                self.rnet = load_rnetwork(cfg.rnet.checkpoint, cfg.rnet)
                # fuera del presupuesto de esta corrida; se reporta aparte en el resumen
                self.pretrained_env_steps = self.rnet.offline_steps
                self.send_log(f"R-network cargada de {cfg.rnet.checkpoint} "
                              f"({self.pretrained_env_steps} env steps previos)")
            else:
                budget = min(cfg.rnet.offline_budget, cfg.total_budget)
                self.rnet, log, steps = train_offline_rnet(cfg, self.streams, budget,
                                                           logger=self.logger)
                self.env_steps += steps
                self.truncated = self.truncated or budget < cfg.rnet.offline_budget
                self.rnet_accuracy = log[-1]["validation_accuracy"]
                self.result.rnet_log.extend(_rnet_log_rows(self.result.method, self.seed,
                                                           "offline", self.env_steps, log))
            self.result.timing.append({"method": self.result.method, "seed": self.seed,
                                       "phase": "rnet_offline",
                                       "seconds": time.perf_counter() - started})

        if self.method == Method.PPO_ECO:
            self.rnet = init_rnetwork(self.input_dim, cfg.rnet, self.streams["rnet"])
            self.rnet_trainer = RNetworkTrainer(self.rnet, cfg.rnet, logger=self.logger)
            self.replay = ObservationReplay(cfg.rnet.replay_size)

        if self.method.uses_rnet:
            self.curiosity = EpisodicCuriosity(self.rnet, cfg.bonus, rng=self.streams["memory"],
                                               logger=self.logger)
        if self.method == Method.PPO_ICM:
            self.icm = init_icm(self.input_dim, self.env.action_count, self.streams["icm"],
                                cfg.icm)
        if self.method == Method.PPO_GRID_ORACLE:
            self.grid = GridOracleState(cell_size=cfg.grid_cell_size, weight=cfg.grid_weight)

    # ------------------------------------------------------------------
    # Bonus por paso
    # ------------------------------------------------------------------

    def _log_bonus(self, score, bonus, inserted, memory_size):
        if self.config.log_bonus_steps:
            self.result.bonus_log.append({
                "method": self.result.method, "seed": self.seed, "step": self.env_steps,
                "score": score, "bonus": bonus, "inserted": bool(inserted),
                "memory_size": memory_size})

    def _episode_start_bonus(self, obs):
        """Observación inicial: entra en memoria / celda visitada, sin acción asociada"""
        if self.curiosity is not None:
            self.curiosity.reset()
            record = self.curiosity.step(obs)
            self._log_bonus(record.score, record.bonus, record.inserted, record.memory_size)
            return int(record.inserted)
        if self.grid is not None:
            grid_oracle_reset(self.grid)
            grid_oracle_bonus(self.grid, self.env.oracle_position())
        return 0

    def _step_bonus(self, obs, action, next_obs):
        """Bonus atribuido a la acción: el de la observación que produjo"""
        if self.curiosity is not None:
            record = self.curiosity.step(next_obs)
            self._log_bonus(record.score, record.bonus, record.inserted, record.memory_size)
            return record.bonus, int(record.inserted)
        if self.icm is not None:
            bonus = icm_bonus(self.icm, obs, action, next_obs)
        elif self.grid is not None:
            bonus = grid_oracle_bonus(self.grid, self.env.oracle_position())
        else:
            bonus = 0.0
        self._log_bonus(float("nan"), bonus, False, 0)
        return bonus, 0

    # ------------------------------------------------------------------
    # ECO: re-entrenamiento online
    # ------------------------------------------------------------------

    def _retrain_online(self):
        rcfg = self.config.rnet
        rng = self.streams["rnet"]
        try:
            dataset = mine_pairs(self.replay.trajectories(), rcfg.k, rcfg.gap_multiplier,
                                 rcfg.pairs_per_episode, rng, logger=self.logger)
            train, validation = split_pairs(dataset, rng)
        except (UsageError, ValueError) as e:
            if self.logger:
                self.logger.warning(f"Re-entrenamiento ECO omitido en {self.env_steps}: {e}")
            return
        log = self.rnet_trainer.fit(train, validation, rcfg.online_epochs, rng)
        self.rnet_accuracy = log[-1]["validation_accuracy"]
        self.result.rnet_log.extend(_rnet_log_rows(self.result.method, self.seed, "online",
                                                   self.env_steps, log))

    # ------------------------------------------------------------------
    # Bucle principal
    # ------------------------------------------------------------------

    def _new_episode(self):
        episode_seed = int(self.streams["env"].integers(0, 2**31 - 1))
        obs = self.env.reset(episode_seed)
        if self.replay is not None:
            self.replay.start_episode()
            self.replay.add(obs)
        position = oracle_position(self.env.state)
        self.current = {"seed": episode_seed, "task_reward": 0.0, "bonuses": [],
                        "insertions": self._episode_start_bonus(obs), "actions": [],
                        "positions": [position]}
        self._record_trajectory(0, -1, position)
        return obs

    def _record_trajectory(self, step, action, position):
        if self.config.dump_trajectories:
            self.result.trajectories.append({
                "method": self.result.method, "seed": self.seed, "episode": self.episode,
                "episode_seed": self.current["seed"], "step": step, "action": action,
                "x": position[0], "y": position[1]})

    def _finish_episode(self):
        ep = self.current
        actions = ep["actions"]
        kinds = [self.action_kinds[a] for a in actions]
        n = max(len(actions), 1)
        self.result.rows.append(MetricsRow(
            method=self.result.method, seed=self.seed, episode=self.episode,
            env_step=self.env_steps, task_reward=ep["task_reward"],
            coverage=coverage_metric(ep["positions"], self.config.grid_cell_size),
            goal_contacts=self.env.state.goal_contacts,
            mean_bonus=float(np.mean(ep["bonuses"])) if ep["bonuses"] else 0.0,
            insertions=ep["insertions"],
            tv_switch_fraction=kinds.count(Action.TV_SWITCH) / n,
            fire_fraction=kinds.count(Action.FIRE) / n,
            rnet_accuracy=self.rnet_accuracy))
        self.episode += 1

    def _update_policy(self, policy, rollout, obs, done):
        ppo = self.config.ppo
        if done:
            rollout.finish(0.0)
        else:
            _, values, _ = policy_forward(policy, np.asarray(obs)[None])
            rollout.finish(values[0])

        callback = None
        if self.icm is not None:
            data_obs = np.stack(rollout.obs)
            data_next = np.stack(rollout.next_obs)
            data_actions = np.asarray(rollout.actions, dtype=np.int64)

            def callback(idx):
                icm_train_step(self.icm, data_obs[idx], data_actions[idx], data_next[idx])

        stats = ppo_update(policy, rollout, ppo, self.streams["policy"],
                           minibatch_callback=callback)
        rollout.clear()
        self.updates += 1
        if self.updates % LOG_EVERY_N_UPDATES == 0:
            recent = self.result.rows[-10:]
            coverage = np.mean([r.coverage for r in recent]) if recent else float("nan")
            self.send_log(f"[{self.result.method} seed={self.seed}] update {self.updates} "
                          f"env_steps={self.env_steps} cobertura={coverage:.1f} "
                          f"entropía={stats['entropy']:.3f} clip={stats['clip_fraction']:.3f}")

    def run_policy_phase(self):
        cfg = self.config
        ppo = cfg.ppo
        policy = init_policy(self.input_dim, self.env.action_count, self.streams["policy"],
                             hidden=ppo.hidden)
        rollout = RolloutBuffer(ppo.horizon)

        obs = self._new_episode() if self.env_steps < cfg.total_budget else None
        done = False
        while self.env_steps < cfg.total_budget:
            action, logp, value = policy_act(policy, obs, self.streams["policy"])
            next_obs, reward, done = self.env.step(action)
            self.env_steps += 1

            bonus, inserted = self._step_bonus(obs, action, next_obs)
            if not np.isfinite(bonus):
                raise TrainingError("Bonus no finito", diagnostics={"env_step": self.env_steps})
            rollout.add(obs, action, logp, value, reward, bonus, done, next_obs=next_obs,
                        task_reward_scale=ppo.task_reward_scale)

            ep = self.current
            ep["task_reward"] += reward
            ep["bonuses"].append(bonus)
            ep["insertions"] += inserted
            ep["actions"].append(action)
            position = oracle_position(self.env.state)
            ep["positions"].append(position)
            self._record_trajectory(len(ep["actions"]), action, position)

            if self.replay is not None:
                self.replay.add(next_obs)
                if self.env_steps % cfg.rnet.retrain_every == 0:
                    self._retrain_online()

            obs = next_obs
            if done:
                self._finish_episode()

            if rollout.is_full or self.env_steps >= cfg.total_budget:
                self._update_policy(policy, rollout, obs, done)

            if done and self.env_steps < cfg.total_budget:
                obs = self._new_episode()
                done = False

        if not done and self.current is not None and self.current["actions"]:
            self.truncated = True
        return policy


def run_seed(config, seed, logger=None):
    """
    Pipeline completo de una semilla

    Returns:
        SeedResult (status 'failed' si hubo TrainingError)
    """
    started = time.perf_counter()
    run = SeedRun(config, seed, logger=logger)
    status = "ok"
    error = ""
    try:
        run.prepare()
        policy_started = time.perf_counter()
        policy = run.run_policy_phase()
        run.result.timing.append({"method": run.result.method, "seed": run.seed,
                                  "phase": "policy",
                                  "seconds": time.perf_counter() - policy_started})
        ckpt_dir = os.path.join(config.output_dir, "checkpoints")
        ensure_dir(ckpt_dir)
        tag = f"{config.method.name.lower()}_seed{run.seed}"
        save_policy(policy, os.path.join(ckpt_dir, f"policy_{tag}.ckpt"))
        if run.rnet is not None:
            save_rnetwork(run.rnet, os.path.join(ckpt_dir, f"rnet_{tag}.ckpt"))
    except TrainingError as e:
        status, error = "failed", str(e)
        if logger:
            logger.error(f"[{run.result.method} seed={run.seed}] semilla fallida: {e} "
                         f"{e.diagnostics}")

    elapsed = time.perf_counter() - started
    run.result.timing.append({"method": run.result.method, "seed": run.seed, "phase": "total",
                              "seconds": elapsed})
    run.result.status = {"status": status, "truncated": run.truncated,
                         "env_steps": run.env_steps,
                         "pretrained_env_steps": run.pretrained_env_steps, "error": error}
    if logger and status == "ok":
        logger.success(f"[{run.result.method} seed={run.seed}] {run.episode} episodios, "
                       f"{run.env_steps} env steps en {format_elapsed(elapsed)}")
    return run.result


def _run_seed_job(args):
    config, seed, logger = args
    return run_seed(config, seed, logger=logger)


def run_seeds(config, logger=None, workers=None):
    """Ejecuta todas las semillas (en paralelo si hay workers) y ordena por semilla"""
    workers = workers or worker_slots()
    jobs = [(config, seed, logger) for seed in config.seeds]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            results = list(pool.map(_run_seed_job, jobs))
    else:
        results = [_run_seed_job(job) for job in jobs]
    return sorted(results, key=lambda r: (r.method, r.seed))


def write_results(config, results, output_dir):
    """Escribe metrics/summary/timing y logs opcionales; devuelve (paths, summary)"""
    rows = [row for r in results for row in r.rows]
    metrics_path = write_metrics_csv(rows, os.path.join(output_dir, "metrics.csv"))
    seed_status = {(r.method, r.seed): r.status for r in results}
    summary = summarize_seeds(metrics_frame(rows), seed_status)
    summary_path = write_csv(summary, os.path.join(output_dir, "summary.csv"))

    write_csv(pd.DataFrame([t for r in results for t in r.timing], columns=TIMING_COLUMNS),
              os.path.join(output_dir, "timing.csv"))
    if config.log_bonus_steps:
        write_csv(pd.DataFrame([b for r in results for b in r.bonus_log],
                               columns=BONUS_LOG_COLUMNS),
                  os.path.join(output_dir, "bonus_log.csv"))
    if config.dump_trajectories:
        write_csv(pd.DataFrame([t for r in results for t in r.trajectories],
                               columns=TRAJECTORY_COLUMNS),
                  os.path.join(output_dir, "trajectories.csv"), schema="trajectories/v1")
    rnet_rows = [x for r in results for x in r.rnet_log]
    if rnet_rows:
        write_csv(pd.DataFrame(rnet_rows, columns=RNET_LOG_COLUMNS),
                  os.path.join(output_dir, "rnet_log.csv"))
    return metrics_path, summary_path, summary


def run_experiment(config, logger=None, workers=None):
    """
    Corre todas las semillas de un ExperimentConfig y escribe los CSVs

    Returns:
        ExperimentResult
    """
    config.validate()
    output_dir = ensure_dir(config.output_dir)
    write_resolved_config(config, os.path.join(output_dir, "resolved_config.cfg"))
    if logger:
        logger.info(f"🚀 {config.name}: {config.method.value} en {config.task.label()}, "
                    f"{len(config.seeds)} semillas, {config.total_budget} env steps por semilla")

    results = run_seeds(config, logger=logger, workers=workers)
    metrics_path, summary_path, summary = write_results(config, results, output_dir)

    failed = [r.seed for r in results if r.status.get("status") != "ok"]
    if logger:
        if failed:
            logger.warning(f"Semillas fallidas: {failed}")
        logger.success(f"Resultados en {output_dir}")
    return ExperimentResult(output_dir=output_dir, metrics_path=metrics_path,
                            summary_path=summary_path, summary=summary, results=results)


def train_rnet_only(config, logger=None):
    """
    Sólo la fase offline de la R-network (primera semilla del config)

    Returns:
        tuple: (ruta del checkpoint, log por época)
    """
    output_dir = ensure_dir(config.output_dir)
    seed = int(config.seeds[0])
    streams = seed_streams(seed, STREAM_NAMES)
    rnet, log, steps = train_offline_rnet(config, streams, config.rnet.offline_budget,
                                          logger=logger)
    path = save_rnetwork(rnet, os.path.join(output_dir, "rnet.ckpt"))
    write_csv(pd.DataFrame(_rnet_log_rows("R-network", seed, "offline", steps, log),
                           columns=RNET_LOG_COLUMNS),
              os.path.join(output_dir, "rnet_log.csv"))
    write_resolved_config(config, os.path.join(output_dir, "resolved_config.cfg"))
    if logger:
        logger.success(f"Checkpoint de R-network: {path}")
    return path, log
