"""
╔══════════════════════════════════════════════════════════════════════════╗
║                  ICM: CURIOSIDAD POR SORPRESA v1.0                       ║
║                                                                          ║
║  φ = embedding(o)          (D → 64 → 64 → 16)                           ║
║  inversa: [φ; φ'] → a      (cross-entropy)                              ║
║  forward: [φ; onehot(a)] → φ'   (½‖f − φ'‖², φ' fijo como objetivo)     ║
║  loss = ratio·forward + (1 − ratio)·inversa                             ║
║  bonus = η · ½‖f(φ(o), a) − φ(o')‖²                                     ║
╚══════════════════════════════════════════════════════════════════════════╝
"""

from dataclasses import dataclass

import numpy as np

from config import (ICM_FEATURE_DIM, ICM_HIDDEN, ICM_FORWARD_INVERSE_RATIO, ICM_BONUS_SCALE,
                    ICM_LR_MULTIPLIER, ICM_LEARNING_RATE, ICM_DIVERGENCE_LIMIT)
from core.adam import AdamState, adam_step
from core.errors import ConfigurationError, TrainingError
from core.losses import softmax_cross_entropy
from core.mlp import init_mlp, mlp_forward, mlp_backward


@dataclass
class ICMConfig:
    feature_dim: int = ICM_FEATURE_DIM
    hidden: int = ICM_HIDDEN
    forward_inverse_ratio: float = ICM_FORWARD_INVERSE_RATIO
    bonus_scale: float = ICM_BONUS_SCALE
    learning_rate: float = ICM_LEARNING_RATE
    lr_multiplier: float = ICM_LR_MULTIPLIER

    def __post_init__(self):
        if not 0.0 < self.forward_inverse_ratio < 1.0:
            raise ConfigurationError("forward_inverse_ratio debe estar en (0, 1)")


@dataclass
class ICMState:
    embedding: object
    inverse_head: object
    forward_head: object
    action_count: int
    config: ICMConfig
    adam: AdamState = None
    updates: int = 0

    @property
    def feature_dim(self):
        return self.embedding.output_dim

    def parameters(self):
        return [self.embedding, self.inverse_head, self.forward_head]


def init_icm(input_dim, action_count, rng, config=None):
    """Crea embedding + cabezas inversa y forward con dimensiones consistentes"""
    config = config or ICMConfig()
    n = config.feature_dim
    embedding = init_mlp([input_dim, config.hidden, config.hidden, n], rng)
    inverse_head = init_mlp([2 * n, config.hidden, action_count], rng)
    forward_head = init_mlp([n + action_count, config.hidden, n], rng)
    state = ICMState(embedding=embedding, inverse_head=inverse_head, forward_head=forward_head,
                     action_count=action_count, config=config)
    state.adam = AdamState.for_params(state.parameters())
    return state


def _flatten_batch(obs):
    obs = np.asarray(obs, dtype=np.float64)
    return obs.reshape(obs.shape[0], -1)


def _one_hot(actions, count):
    actions = np.asarray(actions, dtype=np.int64)
    out = np.zeros((len(actions), count))
    out[np.arange(len(actions)), actions] = 1.0
    return out


def _forward_pass(state, obs, actions, next_obs):
    phi, cache_phi = mlp_forward(state.embedding, _flatten_batch(obs))
    phi_next, cache_next = mlp_forward(state.embedding, _flatten_batch(next_obs))
    prediction, cache_fwd = mlp_forward(
        state.forward_head, np.concatenate([phi, _one_hot(actions, state.action_count)], axis=1))
    return phi, phi_next, prediction, (cache_phi, cache_next, cache_fwd)


def icm_train_step(state, obs, actions, next_obs):
    """
    Un paso de Adam sobre un batch de transiciones (o, a, o')

    Returns:
        tuple: (loss inversa, loss forward)
    """
    actions = np.asarray(actions, dtype=np.int64)
    batch = len(actions)
    ratio = state.config.forward_inverse_ratio
    n = state.feature_dim

    phi, phi_next, prediction, (cache_phi, cache_next, cache_fwd) = \
        _forward_pass(state, obs, actions, next_obs)
    logits, cache_inv = mlp_forward(state.inverse_head, np.concatenate([phi, phi_next], axis=1))

    inverse_loss, dlogits = softmax_cross_entropy(logits, actions)
    diff = prediction - phi_next
    forward_loss = float(0.5 * np.mean(np.sum(diff ** 2, axis=1)))

    total = ratio * forward_loss + (1.0 - ratio) * inverse_loss
    if not np.isfinite(total) or total > ICM_DIVERGENCE_LIMIT:
        raise TrainingError("ICM divergió",
                            diagnostics={"update": state.updates, "forward_loss": forward_loss,
                                         "inverse_loss": inverse_loss})

    g_inv, d_inv = mlp_backward(state.inverse_head, cache_inv, (1.0 - ratio) * dlogits)
    g_fwd, d_fwd = mlp_backward(state.forward_head, cache_fwd, ratio * diff / batch)
    g_phi, _ = mlp_backward(state.embedding, cache_phi, d_inv[:, :n] + d_fwd[:, :n])
    g_next, _ = mlp_backward(state.embedding, cache_next, d_inv[:, n:])

    lr = state.config.learning_rate * state.config.lr_multiplier
    adam_step(state.parameters(), [g_phi.add(g_next), g_inv, g_fwd], state.adam, lr)
    state.updates += 1
    return float(inverse_loss), forward_loss


def icm_bonus_batch(state, obs, actions, next_obs):
    """Bonus de sorpresa para un batch de transiciones (B,)"""
    _, phi_next, prediction, _ = _forward_pass(state, obs, actions, next_obs)
    return state.config.bonus_scale * 0.5 * np.sum((prediction - phi_next) ** 2, axis=1)


def icm_bonus(state, o, a, o_next):
    """b = η · ½‖f(φ(o), a) − φ(o')‖²  (siempre >= 0)"""
    return float(icm_bonus_batch(state, np.asarray(o)[None], [a], np.asarray(o_next)[None])[0])
