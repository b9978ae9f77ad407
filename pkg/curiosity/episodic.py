"""
╔══════════════════════════════════════════════════════════════════════════╗
║                 MÓDULO DE CURIOSIDAD EPISÓDICA (EC) v1.0                 ║
║                                                                          ║
║  obs → embed → score contra memoria → bonus → inserción con umbral      ║
║  Un embedding por paso. Memoria vacía al inicio de cada episodio.       ║
╚══════════════════════════════════════════════════════════════════════════╝
"""

from dataclasses import dataclass

import numpy as np

from curiosity.bonus import BonusConfig, similarity_score, compute_bonus, maybe_insert
from curiosity.memory import EpisodicMemory
from rnet.network import embed


@dataclass(frozen=True)
class BonusRecord:
    """Fila del log de bonus de un paso"""
    score: float
    bonus: float
    inserted: bool
    memory_size: int


class EpisodicCuriosity:
    """
    Bonus de curiosidad basado en alcanzabilidad

    Una instancia por flujo de episodios; la R-network sólo se lee.
    """

    def __init__(self, rnet, config=None, rng=None, logger=None):
        self.rnet = rnet
        self.config = config or BonusConfig()
        self.rng = rng if rng is not None else np.random.default_rng()
        self.memory = EpisodicMemory(self.config.capacity, rng=self.rng)
        self.logger = logger
        self.episode_insertions = 0
        self.last_record = None

    def send_log(self, message):
        """Envía mensaje al log"""
        if self.logger:
            self.logger.debug(message)

    def step(self, obs):
        """Procesa una observación y devuelve su BonusRecord"""
        e = embed(self.rnet, obs)
        score = similarity_score(self.rnet, self.memory, e, self.config.aggregation)
        bonus = compute_bonus(score, self.config)
        inserted = maybe_insert(self.memory, e, bonus, self.config, rng=self.rng)
        if inserted:
            self.episode_insertions += 1
        self.last_record = BonusRecord(score=float(score), bonus=float(bonus),
                                       inserted=inserted, memory_size=len(self.memory))
        return self.last_record

    def reset(self):
        """Vacía la memoria al final del episodio"""
        if len(self.memory):
            self.send_log(f"🧹 Memoria episódica vaciada ({len(self.memory)} entradas, "
                          f"{self.episode_insertions} inserciones)")
        self.memory.clear()
        self.episode_insertions = 0
        self.last_record = None


def ec_step(state, obs):
    """Bonus b de la observación; actualiza la memoria del módulo"""
    return state.step(obs).bonus


def episode_reset(state):
    state.reset()
