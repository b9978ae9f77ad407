"""
Núcleo numérico del workbench (MLP, pérdidas, Adam, verificación de gradientes)
"""

from .errors import (WorkbenchError, ConfigurationError, UsageError, GenerationError,
                     SchemaError, TrainingError)
from .mlp import MLPParams, MLPGrads, MLPCache, init_mlp, mlp_forward, mlp_backward, as_tensor
from .losses import sigmoid, softmax, log_softmax, logistic_loss, softmax_cross_entropy
from .adam import AdamState, adam_step, unique_params
from .gradcheck import finite_diff_check

__all__ = [
    'WorkbenchError', 'ConfigurationError', 'UsageError', 'GenerationError',
    'SchemaError', 'TrainingError',
    'MLPParams', 'MLPGrads', 'MLPCache', 'init_mlp', 'mlp_forward', 'mlp_backward', 'as_tensor',
    'sigmoid', 'softmax', 'log_softmax', 'logistic_loss', 'softmax_cross_entropy',
    'AdamState', 'adam_step', 'unique_params',
    'finite_diff_check'
]
