"""
Harness de experimentos: configuración, ejecución, ablaciones, checkpoints y replay
"""

from .experiment_config import (ExperimentConfig, Method, load_config, apply_overrides,
                                read_config_lines, write_resolved_config)
from .checkpoint import save_rnetwork, load_rnetwork, save_policy, load_policy
from .runner import (run_seed, run_seeds, run_experiment, train_rnet_only, SeedResult,
                     ExperimentResult, ObservationReplay)
from .ablation import run_ablation, suite_settings, SUITES
from .replay import replay_trajectories, replay_episode, read_trajectories, ReplayResult

__all__ = [
    'ExperimentConfig', 'Method', 'load_config', 'apply_overrides', 'read_config_lines',
    'write_resolved_config',
    'save_rnetwork', 'load_rnetwork', 'save_policy', 'load_policy',
    'run_seed', 'run_seeds', 'run_experiment', 'train_rnet_only', 'SeedResult',
    'ExperimentResult', 'ObservationReplay',
    'run_ablation', 'suite_settings', 'SUITES',
    'replay_trajectories', 'replay_episode', 'read_trajectories', 'ReplayResult'
]
