"""
╔══════════════════════════════════════════════════════════════════════════╗
║                     POLÍTICA ACTOR-CRÍTICO (MLP) v1.0                    ║
║                                                                          ║
║  tronco: D → 64 → 64 (relu)                                             ║
║  cabeza de política: 64 → A (logits, softmax)                           ║
║  cabeza de valor:    64 → 1                                             ║
╚══════════════════════════════════════════════════════════════════════════╝
"""

from dataclasses import dataclass

import numpy as np

from config import PPO_HIDDEN
from core.losses import log_softmax
from core.mlp import init_mlp, mlp_forward


@dataclass
class PolicyParams:
    trunk: object
    policy_head: object
    value_head: object
    optimizer: object = None

    @property
    def action_count(self):
        return self.policy_head.output_dim

    @property
    def input_dim(self):
        return self.trunk.input_dim

    def parameters(self):
        return [self.trunk, self.policy_head, self.value_head]


def init_policy(input_dim, action_count, rng, hidden=PPO_HIDDEN):
    return PolicyParams(
        trunk=init_mlp([input_dim, hidden, hidden], rng, output="relu"),
        policy_head=init_mlp([hidden, action_count], rng),
        value_head=init_mlp([hidden, 1], rng),
    )


def policy_forward(params, obs_batch):
    """
    Forward batcheado

    Returns:
        tuple: (logits (B, A), values (B,), caches)
    """
    obs_batch = np.asarray(obs_batch, dtype=np.float64)
    flat = obs_batch.reshape(obs_batch.shape[0], -1)
    features, cache_trunk = mlp_forward(params.trunk, flat)
    logits, cache_policy = mlp_forward(params.policy_head, features)
    values, cache_value = mlp_forward(params.value_head, features)
    return logits, values[:, 0], (cache_trunk, cache_policy, cache_value)


def sample_action(probs, rng):
    """Muestreo por inversa de la CDF con un único uniforme"""
    cdf = np.cumsum(probs)
    index = int(np.searchsorted(cdf, rng.random() * cdf[-1], side="right"))
    return min(index, len(probs) - 1)


def policy_act(params, obs, rng):
    """
    Muestrea una acción de la política

    Returns:
        tuple: (action, logprob, value)
    """
    logits, values, _ = policy_forward(params, np.asarray(obs)[None])
    logp = log_softmax(logits[0])
    action = sample_action(np.exp(logp), rng)
    return action, float(logp[action]), float(values[0])
