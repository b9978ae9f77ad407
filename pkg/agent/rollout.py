"""
╔══════════════════════════════════════════════════════════════════════════╗
║                   BUFFER DE ROLLOUT + GAE v1.0                           ║
║                                                                          ║
║  r̂ = task_scale·r + b                                                   ║
║  δ_t = r̂_t + γ·V(s_{t+1})·(1 − done_t) − V(s_t)                         ║
║  A_t = δ_t + γλ·(1 − done_t)·A_{t+1}        returns = A + V             ║
╚══════════════════════════════════════════════════════════════════════════╝
"""

import numpy as np

from config import PPO_HORIZON, PPO_DISCOUNT_GAMMA, PPO_GAE_LAMBDA, PPO_TASK_REWARD_SCALE
from core.errors import UsageError


def combine_rewards(task_r, bonus, task_reward_scale=PPO_TASK_REWARD_SCALE):
    return task_reward_scale * task_r + bonus


class RolloutBuffer:
    """Pasos de un horizonte fijo de un único flujo de episodios"""

    def __init__(self, horizon=PPO_HORIZON):
        self.horizon = int(horizon)
        self.clear()

    def clear(self):
        self.obs = []
        self.next_obs = []
        self.actions = []
        self.logprobs = []
        self.values = []
        self.task_rewards = []
        self.bonuses = []
        self.augmented = []
        self.dones = []
        self.bootstrap_value = 0.0

    def __len__(self):
        return len(self.actions)

    @property
    def is_full(self):
        return len(self) >= self.horizon

    def add(self, obs, action, logprob, value, task_reward, bonus, done,
            next_obs=None, task_reward_scale=PPO_TASK_REWARD_SCALE):
        if self.is_full:
            raise UsageError(f"Rollout lleno (horizonte {self.horizon})")
        self.obs.append(np.asarray(obs, dtype=np.float64))
        self.next_obs.append(None if next_obs is None else np.asarray(next_obs, dtype=np.float64))
        self.actions.append(int(action))
        self.logprobs.append(float(logprob))
        self.values.append(float(value))
        self.task_rewards.append(float(task_reward))
        self.bonuses.append(float(bonus))
        self.augmented.append(float(combine_rewards(task_reward, bonus, task_reward_scale)))
        self.dones.append(bool(done))

    def set_bonus(self, index, bonus, task_reward_scale=PPO_TASK_REWARD_SCALE):
        """Reemplaza el bonus de un paso (bonus calculado después del paso, p.ej. ICM)"""
        self.bonuses[index] = float(bonus)
        self.augmented[index] = float(
            combine_rewards(self.task_rewards[index], bonus, task_reward_scale))

    def finish(self, bootstrap_value):
        """Valor V(s_H) para el último paso no terminal"""
        self.bootstrap_value = float(bootstrap_value)

    def arrays(self):
        return {
            "obs": np.stack(self.obs),
            "actions": np.asarray(self.actions, dtype=np.int64),
            "logprobs": np.asarray(self.logprobs),
            "values": np.asarray(self.values),
            "rewards": np.asarray(self.augmented),
            "dones": np.asarray(self.dones, dtype=np.float64),
        }


def compute_gae(rollout, discount_gamma=PPO_DISCOUNT_GAMMA, gae_lambda=PPO_GAE_LAMBDA):
    """
    Ventajas GAE y retornos

    Returns:
        tuple: (advantages, returns)
    """
    rewards = np.asarray(rollout.augmented, dtype=np.float64)
    values = np.asarray(rollout.values, dtype=np.float64)
    dones = np.asarray(rollout.dones, dtype=np.float64)
    steps = len(rewards)

    advantages = np.zeros(steps)
    next_value = rollout.bootstrap_value
    next_advantage = 0.0
    for t in range(steps - 1, -1, -1):
        not_done = 1.0 - dones[t]
        delta = rewards[t] + discount_gamma * next_value * not_done - values[t]
        next_advantage = delta + discount_gamma * gae_lambda * not_done * next_advantage
        advantages[t] = next_advantage
        next_value = values[t]

    return advantages, advantages + values
