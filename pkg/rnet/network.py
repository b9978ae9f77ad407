"""
╔══════════════════════════════════════════════════════════════════════════╗
║                RED DE ALCANZABILIDAD R = C(E(o_i), E(o_j))               ║
║                                                                          ║
║  - Ramas de embedding E compartidas o no compartidas                    ║
║  - Comparador: MLP sobre [e1; e2] o σ(e1·e2)                            ║
║  - Ramas no compartidas: embed devuelve (2, n) = [E_a(o); E_b(o)]       ║
╚══════════════════════════════════════════════════════════════════════════╝
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from config import (
    RNET_K, RNET_GAP_MULTIPLIER, RNET_PAIRS_PER_EPISODE,
    RNET_EMBEDDING_DIM, RNET_HIDDEN, RNET_BATCH_SIZE, RNET_LEARNING_RATE, RNET_EPOCHS,
    RNET_OFFLINE_BUDGET, ECO_RETRAIN_EVERY, ECO_REPLAY_SIZE, ECO_EPOCHS
)
from core.errors import ConfigurationError
from core.losses import sigmoid
from core.mlp import init_mlp, mlp_forward, mlp_backward
from core.adam import unique_params


class ComparatorKind(Enum):
    CONCAT_MLP = "concat_mlp"
    DOT_SIGMOID = "dot_sigmoid"


@dataclass
class RNetConfig:
    """Switches de arquitectura y entrenamiento de la R-network"""
    k: int = RNET_K
    gap_multiplier: float = RNET_GAP_MULTIPLIER
    pairs_per_episode: int = RNET_PAIRS_PER_EPISODE
    embedding_dim: int = RNET_EMBEDDING_DIM
    hidden: int = RNET_HIDDEN
    shared_branches: bool = True
    comparator: ComparatorKind = ComparatorKind.CONCAT_MLP
    train_embedding: bool = True
    train_comparator: bool = True
    batch_size: int = RNET_BATCH_SIZE
    learning_rate: float = RNET_LEARNING_RATE
    epochs: int = RNET_EPOCHS
    offline_budget: int = RNET_OFFLINE_BUDGET
    retrain_every: int = ECO_RETRAIN_EVERY
    replay_size: int = ECO_REPLAY_SIZE
    online_epochs: int = ECO_EPOCHS
    checkpoint: str = ""


@dataclass
class RNetwork:
    """
    Red siamesa de alcanzabilidad

    Con ramas compartidas branch_b ES branch_a (un solo conjunto de parámetros).
    offline_steps: env steps consumidos por la fase offline que la entrenó.
    """
    branch_a: object
    branch_b: object
    comparator: ComparatorKind
    comparator_params: object
    embedding_dim: int
    shared: bool
    trained: bool = False
    config: RNetConfig = None
    offline_steps: int = 0

    def parameters(self):
        """MLPParams sin duplicados"""
        params = [self.branch_a, self.branch_b]
        if self.comparator_params is not None:
            params.append(self.comparator_params)
        return unique_params(params)

    def trainable_parameters(self):
        cfg = self.config or RNetConfig()
        params = []
        if cfg.train_embedding:
            params.extend([self.branch_a, self.branch_b])
        if cfg.train_comparator and self.comparator_params is not None:
            params.append(self.comparator_params)
        return unique_params(params)

    @property
    def input_dim(self):
        return self.branch_a.input_dim


def init_rnetwork(input_dim, config, rng):
    """
    R-network con inicialización aleatoria

    Args:
        input_dim: Dimensión de la observación aplanada
        config: RNetConfig
        rng: np.random.Generator

    Returns:
        RNetwork (trained=False)
    """
    sizes = [input_dim, config.hidden, config.hidden, config.embedding_dim]
    branch_a = init_mlp(sizes, rng)
    branch_b = branch_a if config.shared_branches else init_mlp(sizes, rng)

    comparator_params = None
    if config.comparator == ComparatorKind.CONCAT_MLP:
        comparator_params = init_mlp(
            [2 * config.embedding_dim, config.hidden, config.hidden, 1], rng)

    return RNetwork(branch_a=branch_a, branch_b=branch_b, comparator=config.comparator,
                    comparator_params=comparator_params, embedding_dim=config.embedding_dim,
                    shared=config.shared_branches, config=config)


def _flatten(rnet, obs):
    obs = np.asarray(obs, dtype=np.float64)
    flat = obs.reshape(-1)
    if flat.size != rnet.input_dim:
        raise ConfigurationError(
            f"Observación de tamaño {flat.size} no coincide con la R-network ({rnet.input_dim})")
    return flat


def embed(rnet, obs):
    """
    Embedding de una observación

    Returns:
        np.ndarray: (n,) con ramas compartidas, (2, n) sin compartir
    """
    flat = _flatten(rnet, obs)
    e_a, _ = mlp_forward(rnet.branch_a, flat)
    if rnet.shared:
        return e_a
    e_b, _ = mlp_forward(rnet.branch_b, flat)
    return np.stack([e_a, e_b])


def _check_embeddings(rnet, e1, e2):
    if e1.shape[-1] != rnet.embedding_dim or e2.shape[-1] != rnet.embedding_dim:
        raise ConfigurationError(
            f"Embeddings de dimensión {e1.shape[-1]}/{e2.shape[-1]}, "
            f"se esperaba {rnet.embedding_dim}")


def comparator_logits(rnet, first, second):
    """
    Logits del comparador sobre batches alineados

    Args:
        first: (B, n) embeddings de la rama A
        second: (B, n) embeddings de la rama B

    Returns:
        tuple: (logits (B,), cache o None)
    """
    if rnet.comparator == ComparatorKind.DOT_SIGMOID:
        return np.sum(first * second, axis=1), None
    out, cache = mlp_forward(rnet.comparator_params, np.concatenate([first, second], axis=1))
    return out[:, 0], cache


def compare_many(rnet, memory, e):
    """
    Probabilidad de alcanzabilidad de cada entrada de memoria contra e

    Args:
        memory: (M, n) ó (M, 2, n) embeddings almacenados
        e: Embedding consultado

    Returns:
        np.ndarray: (M,) en (0, 1)
    """
    memory = np.asarray(memory, dtype=np.float64)
    e = np.asarray(e, dtype=np.float64)
    _check_embeddings(rnet, memory, e)
    if rnet.shared:
        first = memory
        second = np.broadcast_to(e, memory.shape)
    else:
        first = memory[:, 0, :]
        second = np.broadcast_to(e[1], first.shape)
    logits, _ = comparator_logits(rnet, first, np.ascontiguousarray(second))
    return sigmoid(logits)


def compare(rnet, e1, e2):
    """Probabilidad de que e2 sea alcanzable desde e1 en <= k pasos"""
    return float(compare_many(rnet, np.asarray(e1)[None], e2)[0])


def pair_logits(rnet, first_obs, second_obs):
    """
    Forward completo de pares de observaciones (para entrenamiento)

    Returns:
        tuple: (logits (B,), caches)
    """
    e1, cache_a = mlp_forward(rnet.branch_a, first_obs)
    e2, cache_b = mlp_forward(rnet.branch_b, second_obs)
    logits, cache_c = comparator_logits(rnet, e1, e2)
    return logits, (e1, e2, cache_a, cache_b, cache_c)


def pair_backward(rnet, caches, dlogits):
    """
    Backward de pair_logits

    Returns:
        list: MLPGrads alineados con rnet.trainable_parameters()
    """
    e1, e2, cache_a, cache_b, cache_c = caches
    grads = {}

    if rnet.comparator == ComparatorKind.DOT_SIGMOID:
        de1 = dlogits[:, None] * e2
        de2 = dlogits[:, None] * e1
    else:
        g_comp, d_concat = mlp_backward(rnet.comparator_params, cache_c, dlogits[:, None])
        grads[id(rnet.comparator_params)] = g_comp
        de1 = d_concat[:, :rnet.embedding_dim]
        de2 = d_concat[:, rnet.embedding_dim:]

    g_a, _ = mlp_backward(rnet.branch_a, cache_a, de1)
    g_b, _ = mlp_backward(rnet.branch_b, cache_b, de2)
    if rnet.shared:
        grads[id(rnet.branch_a)] = g_a.add(g_b)
    else:
        grads[id(rnet.branch_a)] = g_a
        grads[id(rnet.branch_b)] = g_b

    return [grads[id(p)] for p in rnet.trainable_parameters()]
