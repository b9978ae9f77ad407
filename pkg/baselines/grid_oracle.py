"""
Grid Oracle: bonus privilegiado por celdas (x, y) nuevas en el episodio

La suma del episodio es weight × celdas distintas visitadas.
"""

from dataclasses import dataclass, field

from config import GRID_ORACLE_CELL_SIZE, GRID_ORACLE_WEIGHT
from core.errors import ConfigurationError


@dataclass
class GridOracleState:
    cell_size: int = GRID_ORACLE_CELL_SIZE
    weight: float = GRID_ORACLE_WEIGHT
    visited: set = field(default_factory=set)

    def __post_init__(self):
        if self.cell_size < 1:
            raise ConfigurationError("cell_size debe ser >= 1")

    def cell_of(self, position):
        x, y = position
        return (int(x) // self.cell_size, int(y) // self.cell_size)


def grid_oracle_bonus(state, position):
    cell = state.cell_of(position)
    if cell in state.visited:
        return 0.0
    state.visited.add(cell)
    return state.weight


def grid_oracle_reset(state):
    state.visited.clear()
