"""
Métodos de comparación: ICM y Grid Oracle
"""

from .icm import (ICMConfig, ICMState, init_icm, icm_train_step, icm_bonus, icm_bonus_batch)
from .grid_oracle import GridOracleState, grid_oracle_bonus, grid_oracle_reset

__all__ = [
    'ICMConfig', 'ICMState', 'init_icm', 'icm_train_step', 'icm_bonus', 'icm_bonus_batch',
    'GridOracleState', 'grid_oracle_bonus', 'grid_oracle_reset'
]
