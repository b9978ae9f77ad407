"""
Entornos de laberinto procedurales
"""

from .maze import MazeSpec, generate_maze, bfs_distances, count_components, render_maze
from .tasks import TaskConfig, TaskKind, TVVariant, Action
from .maze_env import (EnvState, MazeEnvironment, reset, step, oracle_position,
                       observation_shape, render_observation, N_CHANNELS, CH_TV, CH_GOAL,
                       CH_FLASH)

__all__ = [
    'MazeSpec', 'generate_maze', 'bfs_distances', 'count_components', 'render_maze',
    'TaskConfig', 'TaskKind', 'TVVariant', 'Action',
    'EnvState', 'MazeEnvironment', 'reset', 'step', 'oracle_position',
    'observation_shape', 'render_observation', 'N_CHANNELS', 'CH_TV', 'CH_GOAL', 'CH_FLASH'
]
