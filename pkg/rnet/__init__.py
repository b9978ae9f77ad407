"""
Red de alcanzabilidad: minado de pares, red siamesa y entrenamiento
"""

from .pairs import PairDataset, label_pair, mine_pairs, split_pairs
from .network import (RNetwork, RNetConfig, ComparatorKind, init_rnetwork, embed, compare,
                      compare_many, pair_logits, pair_backward)
from .trainer import (RNetworkTrainer, train_rnetwork, validation_accuracy, predict_pairs,
                      pair_loss_and_grads)

__all__ = [
    'PairDataset', 'label_pair', 'mine_pairs', 'split_pairs',
    'RNetwork', 'RNetConfig', 'ComparatorKind', 'init_rnetwork', 'embed', 'compare',
    'compare_many', 'pair_logits', 'pair_backward',
    'RNetworkTrainer', 'train_rnetwork', 'validation_accuracy', 'predict_pairs',
    'pair_loss_and_grads'
]
