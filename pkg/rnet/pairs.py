"""
╔══════════════════════════════════════════════════════════════════════════╗
║                 MINADO DE PARES DE ALCANZABILIDAD v1.0                   ║
║                                                                          ║
║  |i-j| <= k           → positivo (alcanzable)                           ║
║  |i-j| >  γ_gap·k     → negativo                                        ║
║  k < |i-j| <= γ_gap·k → excluido (zona de separación)                   ║
║  Pares siempre dentro de un mismo episodio, orden aleatorio             ║
╚══════════════════════════════════════════════════════════════════════════╝
"""

from dataclasses import dataclass, field

import numpy as np
from sklearn.model_selection import train_test_split

from config import RNET_VALIDATION_FRACTION
from core.errors import ConfigurationError, UsageError


@dataclass
class PairDataset:
    """Pares (obs_i, obs_j, label) con observaciones aplanadas"""
    first: np.ndarray
    second: np.ndarray
    labels: np.ndarray
    k: int
    gap_multiplier: float
    trajectory_ids: np.ndarray = None
    split: str = "train"
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.labels)

    @property
    def input_dim(self):
        return self.first.shape[1]

    def subset(self, indices, split=None):
        indices = np.asarray(indices, dtype=np.int64)
        return PairDataset(first=self.first[indices], second=self.second[indices],
                           labels=self.labels[indices], k=self.k,
                           gap_multiplier=self.gap_multiplier,
                           trajectory_ids=None if self.trajectory_ids is None
                           else self.trajectory_ids[indices],
                           split=split or self.split, meta=dict(self.meta))

    def positive_fraction(self):
        return float(self.labels.mean()) if len(self) else 0.0


def label_pair(i, j, k, gap_multiplier):
    """
    Etiqueta de un par de índices

    Returns:
        int | None: 1 positivo, 0 negativo, None excluido (incluye i == j)
    """
    delta = abs(int(i) - int(j))
    if delta == 0:
        return None
    if delta <= k:
        return 1
    if delta > gap_multiplier * k:
        return 0
    return None


def _balance(labels, rng):
    """Índices que igualan las clases submuestreando la mayoritaria"""
    positives = np.flatnonzero(labels == 1)
    negatives = np.flatnonzero(labels == 0)
    n = min(len(positives), len(negatives))
    keep = np.concatenate([rng.choice(positives, size=n, replace=False),
                           rng.choice(negatives, size=n, replace=False)])
    return np.sort(keep)


def mine_pairs(trajectories, k, gap_multiplier, pairs_per_episode, rng, logger=None):
    """
    Mina pares etiquetados de trayectorias dentro de episodio

    Args:
        trajectories: Secuencia de arrays (T, ...) de observaciones de un episodio
        k: Umbral de pasos para positivos (>= 1)
        gap_multiplier: γ_gap > 1
        pairs_per_episode: Pares muestreados por trayectoria
        rng: np.random.Generator
        logger: Logger opcional para trayectorias descartadas

    Returns:
        PairDataset balanceado
    """
    if k < 1:
        raise ConfigurationError("k debe ser >= 1")
    if gap_multiplier <= 1:
        raise ConfigurationError("gap_multiplier debe ser > 1")

    min_length = int(np.floor(gap_multiplier * k)) + 2
    first, second, labels, traj_ids = [], [], [], []
    skipped = 0

    for traj_id, traj in enumerate(trajectories):
        traj = np.asarray(traj, dtype=np.float64)
        length = len(traj)
        if length < min_length:
            skipped += 1
            continue
        flat = traj.reshape(length, -1)
        negative_offset = int(np.floor(gap_multiplier * k)) + 1

        for _ in range(pairs_per_episode):
            if rng.random() < 0.5:
                delta = int(rng.integers(1, k + 1))
            else:
                delta = int(rng.integers(negative_offset, length))
            i = int(rng.integers(0, length - delta))
            j = i + delta
            label = label_pair(i, j, k, gap_multiplier)
            if label is None:
                continue
            if rng.random() < 0.5:
                i, j = j, i
            first.append(flat[i])
            second.append(flat[j])
            labels.append(label)
            traj_ids.append(traj_id)

    if skipped and logger:
        logger.warning(f"{skipped} trayectorias descartadas (longitud < {min_length})")

    if not labels:
        raise UsageError("Ningún par minado: trayectorias demasiado cortas")

    labels = np.asarray(labels, dtype=np.int64)
    keep = _balance(labels, rng)
    if len(keep) == 0:
        raise UsageError("Sin pares de ambas clases para balancear")
    dataset = PairDataset(first=np.asarray(first)[keep], second=np.asarray(second)[keep],
                          labels=labels[keep], k=k, gap_multiplier=gap_multiplier,
                          trajectory_ids=np.asarray(traj_ids)[keep],
                          meta={"skipped_trajectories": skipped,
                                "source_trajectories": len(trajectories)})
    return dataset


def split_pairs(dataset, rng, validation_fraction=RNET_VALIDATION_FRACTION):
    """
    Separa train/validación estratificado por etiqueta

    Returns:
        tuple: (train PairDataset, validation PairDataset)
    """
    indices = np.arange(len(dataset))
    train_idx, val_idx = train_test_split(
        indices, test_size=validation_fraction,
        random_state=int(rng.integers(0, 2**31 - 1)),
        stratify=dataset.labels
    )
    return (dataset.subset(np.sort(train_idx), split="train"),
            dataset.subset(np.sort(val_idx), split="validation"))
