"""
╔══════════════════════════════════════════════════════════════════════════╗
║                    PPO: SURROGATE RECORTADO v1.0                         ║
║                                                                          ║
║  ratio = exp(logπ − logπ_old)                                           ║
║  L_pol = −mean(min(ratio·A, clip(ratio, 1−ε, 1+ε)·A))                   ║
║  L = L_pol + 0.5·mean((V − R)²) − c_ent·mean(H)                         ║
║  Ventajas normalizadas por update (std >= 1e-8)                         ║
╚══════════════════════════════════════════════════════════════════════════╝
"""

from dataclasses import dataclass

import numpy as np

from config import (PPO_DISCOUNT_GAMMA, PPO_GAE_LAMBDA, PPO_CLIP_EPSILON, PPO_ENTROPY_COEF,
                    PPO_LEARNING_RATE, PPO_EPOCHS, PPO_MINIBATCH_SIZE, PPO_TASK_REWARD_SCALE,
                    PPO_HORIZON, PPO_VALUE_COEF, PPO_HIDDEN, ADVANTAGE_STD_GUARD)
from core.adam import AdamState, adam_step
from core.errors import ConfigurationError, TrainingError
from core.losses import log_softmax
from core.mlp import mlp_backward
from agent.policy import policy_forward
from agent.rollout import compute_gae


@dataclass
class PPOConfig:
    discount_gamma: float = PPO_DISCOUNT_GAMMA
    gae_lambda: float = PPO_GAE_LAMBDA
    clip_epsilon: float = PPO_CLIP_EPSILON
    entropy_coef: float = PPO_ENTROPY_COEF
    learning_rate: float = PPO_LEARNING_RATE
    epochs: int = PPO_EPOCHS
    minibatch_size: int = PPO_MINIBATCH_SIZE
    task_reward_scale: float = PPO_TASK_REWARD_SCALE
    horizon: int = PPO_HORIZON
    value_coef: float = PPO_VALUE_COEF
    hidden: int = PPO_HIDDEN

    def __post_init__(self):
        if self.clip_epsilon <= 0:
            raise ConfigurationError("clip_epsilon debe ser > 0")
        if not 0.0 < self.discount_gamma < 1.0:
            raise ConfigurationError("discount_gamma debe estar en (0, 1)")
        if self.epochs < 1 or self.minibatch_size < 1 or self.horizon < 1:
            raise ConfigurationError("epochs, minibatch_size y horizon deben ser >= 1")


def normalize_advantages(advantages):
    """Media 0, std 1; batch degenerado (std < guard) → sólo centrado"""
    advantages = np.asarray(advantages, dtype=np.float64)
    centered = advantages - advantages.mean()
    return centered / max(float(centered.std()), ADVANTAGE_STD_GUARD)


def ppo_loss(params, batch, config):
    """
    Pérdida PPO combinada sobre un minibatch

    Args:
        params: PolicyParams
        batch: dict con obs, actions, old_logprobs, advantages (ya normalizadas), returns
        config: PPOConfig

    Returns:
        tuple: (loss, grads alineados con params.parameters(), stats)
    """
    actions = np.asarray(batch["actions"], dtype=np.int64)
    advantages = np.asarray(batch["advantages"], dtype=np.float64)
    returns = np.asarray(batch["returns"], dtype=np.float64)
    size = len(actions)
    rows = np.arange(size)
    eps = config.clip_epsilon

    logits, values, (cache_trunk, cache_policy, cache_value) = policy_forward(params, batch["obs"])
    logp = log_softmax(logits)
    probs = np.exp(logp)
    logp_taken = logp[rows, actions]

    ratio = np.exp(logp_taken - np.asarray(batch["old_logprobs"], dtype=np.float64))
    surr_unclipped = ratio * advantages
    surr_clipped = np.clip(ratio, 1.0 - eps, 1.0 + eps) * advantages
    policy_loss = -float(np.mean(np.minimum(surr_unclipped, surr_clipped)))

    value_error = values - returns
    value_loss = float(np.mean(value_error ** 2))

    entropy_per = -np.sum(probs * logp, axis=1)
    entropy = float(np.mean(entropy_per))

    loss = policy_loss + config.value_coef * value_loss - config.entropy_coef * entropy

    # Gradiente respecto a los logits
    active = (surr_unclipped <= surr_clipped).astype(np.float64)
    dlogp_taken = -active * advantages * ratio / size
    dlogits = -probs * dlogp_taken[:, None]
    dlogits[rows, actions] += dlogp_taken
    dlogits += config.entropy_coef * probs * (logp + entropy_per[:, None]) / size

    dvalues = (2.0 * config.value_coef * value_error / size)[:, None]

    g_policy, d_features_p = mlp_backward(params.policy_head, cache_policy, dlogits)
    g_value, d_features_v = mlp_backward(params.value_head, cache_value, dvalues)
    g_trunk, _ = mlp_backward(params.trunk, cache_trunk, d_features_p + d_features_v)

    stats = {
        "loss": float(loss),
        "policy_loss": policy_loss,
        "value_loss": value_loss,
        "entropy": entropy,
        "clip_fraction": float(np.mean(np.abs(ratio - 1.0) > eps)),
        "approx_kl": float(np.mean(np.asarray(batch["old_logprobs"]) - logp_taken)),
    }
    return float(loss), [g_trunk, g_policy, g_value], stats


def ppo_update(params, rollout, config, rng, minibatch_callback=None):
    """
    Épocas de PPO sobre un rollout completo

    Args:
        params: PolicyParams (su estado de Adam vive en params.optimizer)
        rollout: RolloutBuffer con bootstrap_value fijado
        config: PPOConfig
        rng: np.random.Generator para el barajado de minibatches
        minibatch_callback: callback(indices) opcional por minibatch (entrenamiento ICM)

    Returns:
        dict: Medias de policy_loss, value_loss, entropy, clip_fraction, approx_kl
    """
    if params.optimizer is None:
        params.optimizer = AdamState.for_params(params.parameters())

    data = rollout.arrays()
    advantages, returns = compute_gae(rollout, config.discount_gamma, config.gae_lambda)
    advantages = normalize_advantages(advantages)

    steps = len(rollout)
    history = []
    for epoch in range(config.epochs):
        order = rng.permutation(steps)
        for start in range(0, steps, config.minibatch_size):
            idx = order[start:start + config.minibatch_size]
            batch = {"obs": data["obs"][idx], "actions": data["actions"][idx],
                     "old_logprobs": data["logprobs"][idx], "advantages": advantages[idx],
                     "returns": returns[idx]}
            loss, grads, stats = ppo_loss(params, batch, config)
            if not np.isfinite(loss):
                raise TrainingError("Pérdida PPO no finita",
                                    diagnostics={"epoch": epoch, **stats})
            adam_step(params.parameters(), grads, params.optimizer, config.learning_rate)
            history.append(stats)
            if minibatch_callback is not None:
                minibatch_callback(idx)

    keys = ("policy_loss", "value_loss", "entropy", "clip_fraction", "approx_kl")
    return {k: float(np.mean([h[k] for h in history])) for k in keys}
