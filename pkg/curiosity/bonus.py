"""
╔══════════════════════════════════════════════════════════════════════════╗
║                  BONUS DE CURIOSIDAD EPISÓDICA v1.0                      ║
║                                                                          ║
║  C(M, e) = F(compare(e_1, e), ..., compare(e_|M|, e))                   ║
║  b = α·(β − C)          inserción sólo si b > b_novelty                  ║
║  F ∈ {max, percentil (rango más cercano), k-ésimo mayor}                ║
╚══════════════════════════════════════════════════════════════════════════╝
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from config import (EC_ALPHA, EC_BETA, EC_NOVELTY_THRESHOLD, EC_MEMORY_SIZE,
                    EC_AGGREGATION, EC_AGGREGATION_PARAM)
from core.errors import ConfigurationError, UsageError
from rnet.network import compare_many


class AggregationKind(Enum):
    MAX = "max"
    PERCENTILE = "percentile"
    KTH_LARGEST = "kth_largest"


@dataclass(frozen=True)
class Aggregation:
    """Función F que reduce los valores de alcanzabilidad a un score"""
    kind: AggregationKind = AggregationKind.PERCENTILE
    param: int = EC_AGGREGATION_PARAM

    def __post_init__(self):
        if self.kind == AggregationKind.PERCENTILE and not 0 <= self.param <= 100:
            raise ConfigurationError(f"Percentil fuera de [0, 100]: {self.param}")
        if self.kind == AggregationKind.KTH_LARGEST and self.param < 1:
            raise ConfigurationError(f"k-ésimo mayor requiere k >= 1: {self.param}")

    @classmethod
    def parse(cls, text):
        """'max', 'percentile:90' o 'kth_largest:10'"""
        name, _, param = str(text).strip().lower().partition(":")
        try:
            kind = AggregationKind(name)
        except ValueError:
            raise ConfigurationError(f"Agregación desconocida: {text!r}") from None
        if kind == AggregationKind.MAX:
            return cls(kind, 0)
        if not param:
            raise ConfigurationError(f"La agregación {name} necesita parámetro ({name}:N)")
        try:
            value = int(param)
        except ValueError:
            raise ConfigurationError(f"Parámetro de agregación no entero: {text!r}") from None
        return cls(kind, value)

    def label(self):
        if self.kind == AggregationKind.MAX:
            return "max"
        return f"{self.kind.value}:{self.param}"


def _default_aggregation():
    return Aggregation.parse(f"{EC_AGGREGATION}:{EC_AGGREGATION_PARAM}")


@dataclass
class BonusConfig:
    alpha: float = EC_ALPHA
    beta: float = EC_BETA
    novelty_threshold: float = EC_NOVELTY_THRESHOLD
    aggregation: Aggregation = field(default_factory=_default_aggregation)
    capacity: int = EC_MEMORY_SIZE

    def __post_init__(self):
        if self.alpha <= 0:
            raise ConfigurationError("alpha debe ser > 0")
        if self.capacity < 1:
            raise ConfigurationError("capacity debe ser >= 1")


def aggregate(values, aggregation):
    """
    Aplica F a una secuencia no vacía de valores en [0, 1]

    Percentil por rango más cercano: orden ascendente, índice ceil(p/100·m)
    (base 1, acotado a [1, m]).
    """
    values = np.sort(np.asarray(values, dtype=np.float64).reshape(-1))
    m = len(values)
    if m == 0:
        raise UsageError("aggregate requiere al menos un valor")

    if aggregation.kind == AggregationKind.MAX:
        return float(values[-1])
    if aggregation.kind == AggregationKind.PERCENTILE:
        rank = min(max(-(-aggregation.param * m // 100), 1), m)
        return float(values[rank - 1])
    k = min(aggregation.param, m)
    return float(values[m - k])


def similarity_score(rnet, memory, e, aggregation):
    """Score C(M, e); memoria vacía → 0 (máxima novedad)"""
    if len(memory) == 0:
        return 0.0
    return aggregate(compare_many(rnet, memory.as_array(), e), aggregation)


def compute_bonus(score, config):
    return config.alpha * (config.beta - score)


def maybe_insert(memory, e, b, config, rng=None):
    """Inserta e si b > b_novelty (desigualdad estricta)"""
    if b > config.novelty_threshold:
        memory.add(e, rng=rng)
        return True
    return False
