"""
╔══════════════════════════════════════════════════════════════════════════╗
║                 FUNCIONES DE ACTIVACIÓN Y PÉRDIDAS v1.0                  ║
╚══════════════════════════════════════════════════════════════════════════╝
"""

import numpy as np

from config import PROBABILITY_CLIP


def _exact_sigmoid(x):
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    positive = x >= 0
    out[positive] = 1.0 / (1.0 + np.exp(-x[positive]))
    exp_x = np.exp(x[~positive])
    out[~positive] = exp_x / (1.0 + exp_x)
    return out


def sigmoid(x):
    """Sigmoide estable, estrictamente dentro de (0, 1)"""
    out = np.clip(_exact_sigmoid(x), PROBABILITY_CLIP, 1.0 - PROBABILITY_CLIP)
    if out.ndim == 0:
        return float(out)
    return out


def log_softmax(logits):
    """log-softmax sobre el último eje"""
    logits = np.asarray(logits, dtype=np.float64)
    shifted = logits - logits.max(axis=-1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=-1, keepdims=True))


def softmax(logits):
    """Softmax sobre el último eje (suma 1 ± 1e-9)"""
    probs = np.exp(log_softmax(logits))
    return probs / probs.sum(axis=-1, keepdims=True)


def logistic_loss(logit, label):
    """
    Pérdida logística sobre un logit

    loss = -[y·log σ(z) + (1-y)·log(1-σ(z))], en forma log-sum-exp:
    max(z, 0) - z·y + log(1 + exp(-|z|))

    Args:
        logit: Logit z (escalar o array)
        label: Etiqueta 0/1 (mismo shape)

    Returns:
        tuple: (loss, dloss_dlogit)
    """
    z = np.asarray(logit, dtype=np.float64)
    y = np.asarray(label, dtype=np.float64)
    loss = np.maximum(z, 0.0) - z * y + np.log1p(np.exp(-np.abs(z)))
    # σ(z) - y sin recorte; σ(-z) = 1 - σ(z) conserva precisión en la cola
    grad = (1.0 - y) * _exact_sigmoid(z) - y * _exact_sigmoid(-z)
    if loss.ndim == 0:
        return float(loss), float(grad)
    return loss, grad


def softmax_cross_entropy(logits, targets):
    """
    Cross-entropy media sobre un batch de logits

    Args:
        logits: (B, A)
        targets: (B,) índices enteros

    Returns:
        tuple: (loss medio, dloss_dlogits (B, A))
    """
    logits = np.atleast_2d(np.asarray(logits, dtype=np.float64))
    targets = np.asarray(targets, dtype=np.int64)
    batch = logits.shape[0]
    logp = log_softmax(logits)
    loss = -logp[np.arange(batch), targets].mean()
    grad = np.exp(logp)
    grad[np.arange(batch), targets] -= 1.0
    return float(loss), grad / batch
