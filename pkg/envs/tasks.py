"""
╔══════════════════════════════════════════════════════════════════════════╗
║                CONFIGURACIÓN DE TAREAS Y ACCIONES v1.0                   ║
║                                                                          ║
║  Tareas: Dense / Sparse / VerySparse / NoReward                         ║
║  TV aleatoria: None / ImageAction(k) / Noise / NoiseAction              ║
╚══════════════════════════════════════════════════════════════════════════╝
"""

from dataclasses import dataclass
from enum import Enum

from config import (
    EPISODE_LENGTH, MAZE_WIDTH, MAZE_HEIGHT, MAZE_TEXTURE_COUNT, VIEW_SIZE,
    DENSE_OBJECT_COUNT
)
from core.errors import ConfigurationError


class TaskKind(Enum):
    DENSE = "Dense"
    SPARSE = "Sparse"
    VERY_SPARSE = "VerySparse"
    NO_REWARD = "NoReward"


class TVVariant(Enum):
    NONE = "None"
    IMAGE_ACTION = "ImageAction"
    NOISE = "Noise"
    NOISE_ACTION = "NoiseAction"


class Action(Enum):
    FORWARD = "forward"
    BACKWARD = "backward"
    TURN_LEFT = "turn_left"
    TURN_RIGHT = "turn_right"
    FIRE = "fire"
    TV_SWITCH = "tv_switch"


@dataclass
class TaskConfig:
    """Descripción declarativa de una tarea de laberinto"""
    task: TaskKind = TaskKind.SPARSE
    tv_variant: TVVariant = TVVariant.NONE
    tv_images: int = 3
    episode_length: int = EPISODE_LENGTH
    min_spawn_goal_distance: int = 0
    maze_width: int = MAZE_WIDTH
    maze_height: int = MAZE_HEIGHT
    texture_count: int = MAZE_TEXTURE_COUNT
    view_size: int = VIEW_SIZE
    fire_enabled: bool = True
    dense_objects: int = DENSE_OBJECT_COUNT

    def validate(self):
        if self.episode_length <= 0:
            raise ConfigurationError("episode_length debe ser positivo")
        if self.min_spawn_goal_distance < 0:
            raise ConfigurationError("min_spawn_goal_distance no puede ser negativo")
        if self.task == TaskKind.VERY_SPARSE and self.min_spawn_goal_distance <= 0:
            raise ConfigurationError("VerySparse requiere min_spawn_goal_distance > 0")
        if self.tv_variant == TVVariant.IMAGE_ACTION and self.tv_images < 1:
            raise ConfigurationError("ImageAction(k) requiere k >= 1")
        if self.view_size < 3 or self.view_size % 2 == 0:
            raise ConfigurationError("view_size debe ser impar y >= 3")
        if self.task == TaskKind.DENSE and self.dense_objects < 1:
            raise ConfigurationError("Dense requiere al menos un objeto")
        return self

    @property
    def has_tv_switch(self):
        return self.tv_variant in (TVVariant.IMAGE_ACTION, TVVariant.NOISE_ACTION)

    def action_set(self):
        """Acciones disponibles, en orden de índice"""
        actions = [Action.FORWARD, Action.BACKWARD, Action.TURN_LEFT, Action.TURN_RIGHT]
        if self.fire_enabled:
            actions.append(Action.FIRE)
        if self.has_tv_switch:
            actions.append(Action.TV_SWITCH)
        return actions

    @property
    def action_count(self):
        return len(self.action_set())

    def label(self):
        """Etiqueta corta para logs y CSVs"""
        tv = self.tv_variant.value
        if self.tv_variant == TVVariant.IMAGE_ACTION:
            tv = f"ImageAction{self.tv_images}"
        return f"{self.task.value}+{tv}" if self.tv_variant != TVVariant.NONE else self.task.value
