"""
╔══════════════════════════════════════════════════════════════════════════╗
║              VERIFICACIÓN DE GRADIENTES (DIFERENCIAS CENTRALES)          ║
╚══════════════════════════════════════════════════════════════════════════╝
"""

import numpy as np

from config import FINITE_DIFF_EPS
from core.errors import ConfigurationError
from core.mlp import MLPParams, MLPGrads


def finite_diff_check(params, inputs, loss_fn, eps=FINITE_DIFF_EPS):
    """
    Compara gradientes analíticos con diferencias centrales

    Args:
        params: MLPParams o lista de MLPParams
        inputs: Lo que loss_fn necesite (se pasa tal cual)
        loss_fn: loss_fn(params, inputs) -> (loss, grads) con grads alineados a params
        eps: Paso de la diferencia central

    Returns:
        float: max |analítico - numérico| / max(1, |analítico|)
    """
    if eps <= 0:
        raise ConfigurationError("eps debe ser > 0")

    _, grads = loss_fn(params, inputs)
    param_list = [params] if isinstance(params, MLPParams) else list(params)
    grad_list = [grads] if isinstance(grads, MLPGrads) else list(grads)

    worst = 0.0
    for p, g in zip(param_list, grad_list):
        for array, analytic in zip(p.arrays(), g.arrays()):
            flat = array.reshape(-1)
            analytic_flat = analytic.reshape(-1)
            for idx in range(flat.size):
                original = flat[idx]
                flat[idx] = original + eps
                loss_plus, _ = loss_fn(params, inputs)
                flat[idx] = original - eps
                loss_minus, _ = loss_fn(params, inputs)
                flat[idx] = original

                numeric = (loss_plus - loss_minus) / (2.0 * eps)
                error = abs(analytic_flat[idx] - numeric) / max(1.0, abs(analytic_flat[idx]))
                worst = max(worst, error)

    return worst
