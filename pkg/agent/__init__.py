"""
Agente PPO: política MLP, rollouts con GAE y update recortado
"""

from .policy import PolicyParams, init_policy, policy_forward, policy_act, sample_action
from .rollout import RolloutBuffer, combine_rewards, compute_gae
from .ppo import PPOConfig, normalize_advantages, ppo_loss, ppo_update

__all__ = [
    'PolicyParams', 'init_policy', 'policy_forward', 'policy_act', 'sample_action',
    'RolloutBuffer', 'combine_rewards', 'compute_gae',
    'PPOConfig', 'normalize_advantages', 'ppo_loss', 'ppo_update'
]
