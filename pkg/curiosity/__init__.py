"""
Curiosidad episódica: memoria, bonus y bucle por paso
"""

from .memory import EpisodicMemory
from .bonus import (Aggregation, AggregationKind, BonusConfig, aggregate, similarity_score,
                    compute_bonus, maybe_insert)
from .episodic import EpisodicCuriosity, BonusRecord, ec_step, episode_reset

__all__ = [
    'EpisodicMemory',
    'Aggregation', 'AggregationKind', 'BonusConfig', 'aggregate', 'similarity_score',
    'compute_bonus', 'maybe_insert',
    'EpisodicCuriosity', 'BonusRecord', 'ec_step', 'episode_reset'
]
