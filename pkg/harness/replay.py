"""
Replay de trayectorias grabadas

Cada episodio se regenera desde su episode_seed y se re-aplican las acciones;
cualquier posición distinta a la grabada marca el episodio como divergente.
"""

import os
from dataclasses import dataclass

import pandas as pd

from core.errors import SchemaError
from envs.maze_env import reset, step, oracle_position
from analysis.metrics import coverage_metric

TRAJECTORY_SCHEMA_LINE = "# schema=trajectories/v1\n"
REQUIRED_COLUMNS = ["method", "seed", "episode", "episode_seed", "step", "action", "x", "y"]


@dataclass
class ReplayResult:
    method: str
    seed: int
    episode: int
    steps: int
    coverage: int
    diverged: bool
    first_divergence: int = -1


def read_trajectories(path):
    with open(path, "r", encoding="utf-8") as f:
        first = f.readline()
    if first != TRAJECTORY_SCHEMA_LINE:
        raise SchemaError(f"{path}: no es un archivo de trayectorias ({first.strip()!r})")
    frame = pd.read_csv(path, skiprows=1)
    missing = [c for c in REQUIRED_COLUMNS if c not in frame.columns]
    if missing:
        raise SchemaError(f"{path}: falta la columna {missing[0]!r}; "
                          f"disponibles: {', '.join(frame.columns)}")
    return frame.sort_values(["method", "seed", "episode", "step"], kind="mergesort")


def replay_episode(task, episode_seed, actions, recorded_positions):
    """
    Re-ejecuta un episodio

    Args:
        task: TaskConfig del run original
        episode_seed: Semilla del episodio
        actions: Acciones de los pasos 1..T
        recorded_positions: Posiciones grabadas de los pasos 0..T

    Returns:
        tuple: (positions reproducidas, índice de la primera divergencia o -1)
    """
    state, _ = reset(task, int(episode_seed))
    positions = [oracle_position(state)]
    for action in actions:
        if state.done:
            break
        step(state, int(action))
        positions.append(oracle_position(state))

    first_divergence = -1
    for i, recorded in enumerate(recorded_positions):
        if i >= len(positions) or tuple(positions[i]) != tuple(recorded):
            first_divergence = i
            break
    return positions, first_divergence


def replay_trajectories(path, task, cell_size=1, logger=None):
    """Replay de todos los episodios de un trajectories.csv"""
    frame = read_trajectories(path)
    results = []
    for (method, seed, episode), group in frame.groupby(["method", "seed", "episode"], sort=True):
        recorded = list(zip(group["x"].astype(int), group["y"].astype(int)))
        actions = group["action"].astype(int).tolist()[1:]
        positions, divergence = replay_episode(task, group["episode_seed"].iloc[0], actions,
                                               recorded)
        result = ReplayResult(method=method, seed=int(seed), episode=int(episode),
                              steps=len(actions),
                              coverage=coverage_metric(positions, cell_size),
                              diverged=divergence >= 0, first_divergence=divergence)
        if result.diverged and logger:
            logger.warning(f"{method} seed={seed} episodio {episode}: divergencia en el paso "
                           f"{divergence}")
        results.append(result)
    return results


def default_config_for(path):
    """resolved_config.cfg junto al archivo de trayectorias, si existe"""
    candidate = os.path.join(os.path.dirname(os.path.abspath(path)), "resolved_config.cfg")
    return candidate if os.path.exists(candidate) else None
