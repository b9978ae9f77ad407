"""
╔══════════════════════════════════════════════════════════════════════════╗
║                  ENTORNO DE LABERINTO EGOCÉNTRICO v1.0                   ║
║                                                                          ║
║  - Observación: parche 5x5 rotado según el heading del agente           ║
║  - Canales: pared, suelo, meta/objeto, 4 texturas, TV, flash de disparo ║
║  - Sparse/VerySparse: +10 en la meta y re-spawn aleatorio               ║
║  - Dense: +1 por objeto recogido (8 objetos)                            ║
║  - TV aleatoria en el cuadrante inferior derecho de la vista            ║
║  - Posición (x, y) privilegiada: solo Grid Oracle y métricas            ║
╚══════════════════════════════════════════════════════════════════════════╝
"""

from dataclasses import dataclass, field

import numpy as np

from config import (
    TEXTURE_BUCKETS, GOAL_REWARD, DENSE_OBJECT_REWARD,
    SPAWN_MAX_ATTEMPTS, MAZE_MAX_REGENERATIONS
)
from core.errors import GenerationError, UsageError
from envs.maze import generate_maze, bfs_distances
from envs.tasks import TaskKind, TVVariant, Action


CH_WALL = 0
CH_FLOOR = 1
CH_GOAL = 2
CH_TEXTURE = 3
CH_TV = CH_TEXTURE + TEXTURE_BUCKETS
CH_FLASH = CH_TV + 1
N_CHANNELS = CH_FLASH + 1

# N, E, S, W  (y crece hacia el sur)
HEADINGS = [(0, -1), (1, 0), (0, 1), (-1, 0)]


def observation_shape(task):
    return (N_CHANNELS, task.view_size, task.view_size)


def tv_quadrant(view_size):
    """Slice (filas, columnas) del cuadrante inferior derecho"""
    half = view_size // 2
    return slice(half + 1, view_size), slice(half + 1, view_size)


@dataclass
class EnvState:
    """Estado completo de un episodio (propiedad exclusiva de un worker)"""
    task: object
    maze: object
    position: tuple
    heading: int
    rng: np.random.Generator
    episode_seed: int
    goal_distances: np.ndarray = None
    step_count: int = 0
    done: bool = False
    tv_image_id: int = -1
    tv_screen: np.ndarray = None
    flash: bool = False
    objects: set = field(default_factory=set)
    goal_contacts: int = 0


def _tv_image(task, image_id):
    """
    Patrón de la imagen image_id en el cuadrante de TV

    La imagen enciende la celda image_id % celdas con intensidad
    (1 + image_id // celdas) / niveles. Con tantas imágenes como celdas
    (o menos) los patrones son one-hot ortogonales; con más imágenes
    que celdas (p.ej. ImageAction(10) o (30) con pantalla 2x2) las que
    comparten celda solo se distinguen por nivel de intensidad.
    """
    side = task.view_size - task.view_size // 2 - 1
    screen = np.zeros((side, side))
    cells = side * side
    levels = int(np.ceil(task.tv_images / cells))
    cell = image_id % cells
    screen[cell // side, cell % side] = (1 + image_id // cells) / levels
    return screen


def _tv_noise(task, rng):
    side = task.view_size - task.view_size // 2 - 1
    return rng.uniform(0.0, 1.0, size=(side, side))


def _sample_spawn(state):
    """Celda de spawn; VerySparse exige distancia mínima a la meta"""
    maze, task, rng = state.maze, state.task, state.rng
    candidates = maze.spawn_cells
    if task.task != TaskKind.VERY_SPARSE:
        return candidates[int(rng.integers(0, len(candidates)))]

    for _ in range(SPAWN_MAX_ATTEMPTS):
        x, y = candidates[int(rng.integers(0, len(candidates)))]
        if state.goal_distances[y, x] >= task.min_spawn_goal_distance:
            return (x, y)

    raise GenerationError(
        f"Sin spawn a distancia >= {task.min_spawn_goal_distance} tras {SPAWN_MAX_ATTEMPTS} intentos")


def render_observation(state):
    """Observación egocéntrica (C, V, V) con entradas en [0, 1]"""
    task, maze = state.task, state.maze
    size = task.view_size
    half = size // 2
    obs = np.zeros((N_CHANNELS, size, size))
    px, py = state.position

    for row in range(size):
        for col in range(size):
            x, y = px + col - half, py + row - half
            inside = 0 <= x < maze.width and 0 <= y < maze.height
            if not inside or maze.walls[y, x]:
                obs[CH_WALL, row, col] = 1.0
                texture = maze.wall_texture_id[y, x] if inside else 0
                obs[CH_TEXTURE + texture % TEXTURE_BUCKETS, row, col] = 1.0
                continue
            obs[CH_FLOOR, row, col] = 1.0
            if task.task in (TaskKind.SPARSE, TaskKind.VERY_SPARSE) and (x, y) == maze.goal_cell:
                obs[CH_GOAL, row, col] = 1.0
            elif task.task == TaskKind.DENSE and (x, y) in state.objects:
                obs[CH_GOAL, row, col] = 1.0

    # El heading apunta siempre a la fila superior
    obs = np.rot90(obs, k=state.heading, axes=(1, 2)).copy()

    if task.tv_variant != TVVariant.NONE:
        rows, cols = tv_quadrant(size)
        obs[CH_TV, rows, cols] = state.tv_screen
    if state.flash:
        obs[CH_FLASH] = 1.0

    return obs


def reset(task, seed):
    """
    Inicia un episodio: laberinto nuevo + spawn

    Args:
        task: TaskConfig
        seed: Semilla del episodio

    Returns:
        tuple: (EnvState, observación)
    """
    task.validate()
    rng = np.random.default_rng(seed)

    state = None
    for _ in range(MAZE_MAX_REGENERATIONS):
        maze = generate_maze(int(rng.integers(0, 2**62)), task.maze_width, task.maze_height,
                             task.texture_count)
        state = EnvState(task=task, maze=maze, position=maze.goal_cell, heading=0,
                         rng=rng, episode_seed=int(seed),
                         goal_distances=bfs_distances(maze, maze.goal_cell))
        try:
            state.position = _sample_spawn(state)
            break
        except GenerationError:
            state = None

    if state is None:
        raise GenerationError(
            f"Ningún laberinto admite distancia {task.min_spawn_goal_distance} "
            f"tras {MAZE_MAX_REGENERATIONS} regeneraciones")

    state.heading = int(rng.integers(0, 4))

    if task.task == TaskKind.DENSE:
        free = [c for c in maze.open_cells() if c != state.position]
        count = min(task.dense_objects, len(free))
        chosen = rng.choice(len(free), size=count, replace=False)
        state.objects = {free[i] for i in sorted(chosen.tolist())}

    if task.tv_variant == TVVariant.IMAGE_ACTION:
        state.tv_image_id = int(rng.integers(0, task.tv_images))
        state.tv_screen = _tv_image(task, state.tv_image_id)
    elif task.tv_variant in (TVVariant.NOISE, TVVariant.NOISE_ACTION):
        state.tv_screen = _tv_noise(task, rng)

    return state, render_observation(state)


def _switch_tv(state):
    task, rng = state.task, state.rng
    if task.tv_variant == TVVariant.IMAGE_ACTION:
        if task.tv_images > 1:
            offset = int(rng.integers(1, task.tv_images))
            state.tv_image_id = (state.tv_image_id + offset) % task.tv_images
        state.tv_screen = _tv_image(task, state.tv_image_id)
    else:
        state.tv_screen = _tv_noise(task, rng)


def step(state, action):
    """
    Avanza un paso (muta y devuelve el mismo EnvState)

    Args:
        state: EnvState activo
        action: Índice dentro de task.action_set()

    Returns:
        tuple: (state, observación, reward, done)
    """
    if state.done:
        raise UsageError("Episodio terminado: llamar a reset()")

    actions = state.task.action_set()
    if not 0 <= int(action) < len(actions):
        raise UsageError(f"Acción {action} fuera de rango [0, {len(actions)})")

    task, maze = state.task, state.maze
    kind = actions[int(action)]
    state.flash = False

    if kind in (Action.FORWARD, Action.BACKWARD):
        dx, dy = HEADINGS[state.heading]
        if kind == Action.BACKWARD:
            dx, dy = -dx, -dy
        nx, ny = state.position[0] + dx, state.position[1] + dy
        if maze.is_open(nx, ny):
            state.position = (nx, ny)
    elif kind == Action.TURN_LEFT:
        state.heading = (state.heading - 1) % 4
    elif kind == Action.TURN_RIGHT:
        state.heading = (state.heading + 1) % 4
    elif kind == Action.FIRE:
        state.flash = True
    elif kind == Action.TV_SWITCH:
        _switch_tv(state)

    if task.tv_variant == TVVariant.NOISE:
        state.tv_screen = _tv_noise(task, state.rng)

    reward = 0.0
    if task.task in (TaskKind.SPARSE, TaskKind.VERY_SPARSE) and state.position == maze.goal_cell:
        reward = GOAL_REWARD
        state.goal_contacts += 1
        state.position = _sample_spawn(state)
        state.heading = int(state.rng.integers(0, 4))
    elif task.task == TaskKind.DENSE and state.position in state.objects:
        state.objects.discard(state.position)
        reward = DENSE_OBJECT_REWARD
        state.goal_contacts += 1

    state.step_count += 1
    state.done = state.step_count >= task.episode_length or \
        (task.task == TaskKind.DENSE and not state.objects)

    return state, render_observation(state), reward, state.done


def oracle_position(state):
    """Celda real del agente (información privilegiada)"""
    return (int(state.position[0]), int(state.position[1]))


class MazeEnvironment:
    """
    Entorno con interfaz de objeto

    allow_position_access=False separa a EC/ICM de la posición privilegiada.
    """

    def __init__(self, task, allow_position_access=True, logger=None):
        self.task = task.validate()
        self.allow_position_access = allow_position_access
        self.logger = logger
        self.state = None

    def send_log(self, message):
        """Envía mensaje al log"""
        if self.logger:
            self.logger.debug(message)

    @property
    def action_count(self):
        return self.task.action_count

    @property
    def observation_shape(self):
        return observation_shape(self.task)

    def reset(self, seed):
        self.state, obs = reset(self.task, seed)
        self.send_log(f"Episodio nuevo (seed={seed}) spawn={self.state.position}")
        return obs

    def step(self, action):
        _, obs, reward, done = step(self.state, action)
        return obs, reward, done

    def oracle_position(self):
        if not self.allow_position_access:
            raise UsageError("Acceso a posición deshabilitado para este entorno")
        return oracle_position(self.state)

    def action_kind(self, action):
        return self.task.action_set()[int(action)]
