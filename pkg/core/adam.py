"""
╔══════════════════════════════════════════════════════════════════════════╗
║                       OPTIMIZADOR ADAM v1.0                              ║
║                                                                          ║
║  m(t) = β1·m + (1-β1)·g      v(t) = β2·v + (1-β2)·g²                    ║
║  θ -= lr · m̂ / (√v̂ + ε)  con corrección de sesgo                        ║
╚══════════════════════════════════════════════════════════════════════════╝
"""

from dataclasses import dataclass, field

import numpy as np

from config import ADAM_BETA1, ADAM_BETA2, ADAM_EPSILON
from core.errors import ConfigurationError, TrainingError
from core.mlp import MLPParams, MLPGrads


def _as_list(items, kind):
    if isinstance(items, kind):
        return [items]
    return list(items)


def unique_params(params):
    """Quita duplicados por identidad (ramas compartidas)"""
    seen, out = set(), []
    for p in _as_list(params, MLPParams):
        if id(p) not in seen:
            seen.add(id(p))
            out.append(p)
    return out


@dataclass
class AdamState:
    """Momentos de Adam, uno por array de parámetros"""
    first_moment: list
    second_moment: list
    step: int = 0
    beta1: float = ADAM_BETA1
    beta2: float = ADAM_BETA2
    epsilon: float = ADAM_EPSILON
    shapes: list = field(default_factory=list)

    @classmethod
    def for_params(cls, params, beta1=ADAM_BETA1, beta2=ADAM_BETA2, epsilon=ADAM_EPSILON):
        arrays = [a for p in unique_params(params) for a in p.arrays()]
        return cls(first_moment=[np.zeros_like(a) for a in arrays],
                   second_moment=[np.zeros_like(a) for a in arrays],
                   beta1=beta1, beta2=beta2, epsilon=epsilon,
                   shapes=[a.shape for a in arrays])


def adam_step(params, grads, state, learning_rate):
    """
    Un paso de Adam in-place

    Args:
        params: MLPParams o lista de MLPParams (sin duplicados)
        grads: MLPGrads o lista alineada con params
        state: AdamState creado con AdamState.for_params
        learning_rate: Tasa de aprendizaje

    Returns:
        tuple: (params, state)
    """
    param_list = _as_list(params, MLPParams)
    grad_list = _as_list(grads, MLPGrads)
    if len(param_list) != len(grad_list):
        raise ConfigurationError("params y grads no están alineados")

    param_arrays = [a for p in param_list for a in p.arrays()]
    grad_arrays = [g for gr in grad_list for g in gr.arrays()]
    if [a.shape for a in param_arrays] != state.shapes or \
            [g.shape for g in grad_arrays] != state.shapes:
        raise ConfigurationError("Shapes de Adam no coinciden con los parámetros")

    for i, g in enumerate(grad_arrays):
        if not np.all(np.isfinite(g)):
            raise TrainingError("Gradiente no finito en Adam",
                                diagnostics={"array_index": i, "step": state.step,
                                             "nan_count": int(np.isnan(g).sum())})

    state.step += 1
    bias1 = 1.0 - state.beta1 ** state.step
    bias2 = 1.0 - state.beta2 ** state.step
    for i, (p, g) in enumerate(zip(param_arrays, grad_arrays)):
        state.first_moment[i] = state.beta1 * state.first_moment[i] + (1.0 - state.beta1) * g
        state.second_moment[i] = state.beta2 * state.second_moment[i] + (1.0 - state.beta2) * g * g
        m_hat = state.first_moment[i] / bias1
        v_hat = state.second_moment[i] / bias2
        p -= learning_rate * m_hat / (np.sqrt(v_hat) + state.epsilon)

    for p in param_list:
        p.version += 1

    return params, state
