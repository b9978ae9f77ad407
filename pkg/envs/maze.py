"""
╔══════════════════════════════════════════════════════════════════════════╗
║                 GENERADOR DE LABERINTOS PROCEDURALES v1.0                ║
║                                                                          ║
║  - Recursive backtracker (DFS) → laberinto perfecto                     ║
║  - 10% de paredes internas removidas → ciclos                           ║
║  - Textura aleatoria por celda de pared                                 ║
║  - Determinista dada la semilla                                         ║
╚══════════════════════════════════════════════════════════════════════════╝
"""

from collections import deque
from dataclasses import dataclass

import numpy as np

from config import MAZE_MIN_SIZE, MAZE_LOOP_FRACTION, MAZE_TEXTURE_COUNT
from core.errors import ConfigurationError


@dataclass
class MazeSpec:
    """
    Laberinto generado

    walls[y, x] es True en paredes; wall_texture_id[y, x] vale -1 en celdas abiertas.
    """
    width: int
    height: int
    walls: np.ndarray
    wall_texture_id: np.ndarray
    spawn_cells: list
    goal_cell: tuple
    seed: int

    def is_open(self, x, y):
        return 0 <= x < self.width and 0 <= y < self.height and not self.walls[y, x]

    def open_cells(self):
        ys, xs = np.nonzero(~self.walls)
        return list(zip(xs.tolist(), ys.tolist()))


def generate_maze(seed, width, height, texture_count=MAZE_TEXTURE_COUNT,
                  loop_fraction=MAZE_LOOP_FRACTION):
    """
    Genera un laberinto conectado

    Args:
        seed: Semilla entera
        width, height: Dimensiones impares >= 7 (en celdas)
        texture_count: Número de texturas de pared
        loop_fraction: Fracción de paredes internas removibles que se abren

    Returns:
        MazeSpec
    """
    if width % 2 == 0 or height % 2 == 0:
        raise ConfigurationError(f"Dimensiones deben ser impares: {width}x{height}")
    if width < MAZE_MIN_SIZE or height < MAZE_MIN_SIZE:
        raise ConfigurationError(
            f"Laberinto {width}x{height} demasiado pequeño (mínimo {MAZE_MIN_SIZE})")
    if texture_count < 1:
        raise ConfigurationError("texture_count debe ser >= 1")

    rng = np.random.default_rng(seed)
    walls = np.ones((height, width), dtype=bool)

    # Carving iterativo desde una celda impar aleatoria
    start = (int(rng.integers(0, width // 2)) * 2 + 1, int(rng.integers(0, height // 2)) * 2 + 1)
    walls[start[1], start[0]] = False
    stack = [start]
    directions = [(0, -2), (2, 0), (0, 2), (-2, 0)]

    while stack:
        x, y = stack[-1]
        candidates = [(dx, dy) for dx, dy in directions
                      if 0 < x + dx < width - 1 and 0 < y + dy < height - 1
                      and walls[y + dy, x + dx]]
        if not candidates:
            stack.pop()
            continue
        dx, dy = candidates[int(rng.integers(0, len(candidates)))]
        walls[y + dy // 2, x + dx // 2] = False
        walls[y + dy, x + dx] = False
        stack.append((x + dx, y + dy))

    # Ciclos: abrir paredes internas que separan dos celdas abiertas
    removable = []
    for y in range(1, height - 1):
        for x in range(1, width - 1):
            if not walls[y, x]:
                continue
            horizontal = not walls[y, x - 1] and not walls[y, x + 1]
            vertical = not walls[y - 1, x] and not walls[y + 1, x]
            if horizontal != vertical:
                removable.append((x, y))

    n_remove = int(round(loop_fraction * len(removable)))
    if n_remove > 0:
        chosen = rng.choice(len(removable), size=n_remove, replace=False)
        for idx in sorted(chosen.tolist()):
            x, y = removable[idx]
            walls[y, x] = False

    textures = np.where(walls, rng.integers(0, texture_count, size=walls.shape), -1)

    ys, xs = np.nonzero(~walls)
    open_cells = list(zip(xs.tolist(), ys.tolist()))
    goal = open_cells[int(rng.integers(0, len(open_cells)))]

    return MazeSpec(width=width, height=height, walls=walls, wall_texture_id=textures,
                    spawn_cells=[c for c in open_cells if c != goal], goal_cell=goal,
                    seed=int(seed))


def bfs_distances(maze, source):
    """
    Distancias de camino más corto (en celdas) desde source

    Returns:
        np.ndarray: (height, width) con -1 en celdas inalcanzables o paredes
    """
    dist = np.full((maze.height, maze.width), -1, dtype=np.int64)
    sx, sy = source
    if not maze.is_open(sx, sy):
        return dist

    dist[sy, sx] = 0
    queue = deque([(sx, sy)])
    while queue:
        x, y = queue.popleft()
        for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            nx, ny = x + dx, y + dy
            if maze.is_open(nx, ny) and dist[ny, nx] < 0:
                dist[ny, nx] = dist[y, x] + 1
                queue.append((nx, ny))
    return dist


def count_components(maze):
    """Número de componentes conexas de celdas abiertas"""
    seen = np.zeros_like(maze.walls)
    components = 0
    for x, y in maze.open_cells():
        if seen[y, x]:
            continue
        components += 1
        seen |= bfs_distances(maze, (x, y)) >= 0
    return components


def render_maze(maze, agent=None):
    """Volcado en texto plano: '#' pared, '.' suelo, 'G' meta, 'A' agente"""
    lines = []
    for y in range(maze.height):
        row = []
        for x in range(maze.width):
            if agent is not None and (x, y) == tuple(agent):
                row.append("A")
            elif maze.walls[y, x]:
                row.append("#")
            elif (x, y) == tuple(maze.goal_cell):
                row.append("G")
            else:
                row.append(".")
        lines.append("".join(row))
    return "\n".join(lines)
