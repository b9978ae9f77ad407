"""
╔══════════════════════════════════════════════════════════════════════════╗
║               ENTRENAMIENTO SIAMÉS DE LA R-NETWORK v1.0                  ║
║                                                                          ║
║  - Mini-batches de 64 pares, re-shuffle en cada época                   ║
║  - Pérdida logística + Adam                                             ║
║  - Log por época: pérdida de entrenamiento + accuracy de validación     ║
║  - Divergencia (pérdida > 10x inicial) → TrainingError                  ║
╚══════════════════════════════════════════════════════════════════════════╝
"""

import numpy as np
from sklearn.metrics import accuracy_score

from config import RNET_DIVERGENCE_FACTOR, RNET_DECISION_THRESHOLD
from core.adam import AdamState, adam_step
from core.errors import TrainingError, UsageError
from core.losses import logistic_loss, sigmoid
from rnet.network import RNetConfig, init_rnetwork, pair_logits, pair_backward
from rnet.pairs import split_pairs


def predict_pairs(rnet, dataset, batch_size=1024):
    """Probabilidades de alcanzabilidad para todos los pares"""
    probs = []
    for start in range(0, len(dataset), batch_size):
        stop = start + batch_size
        logits, _ = pair_logits(rnet, dataset.first[start:stop], dataset.second[start:stop])
        probs.append(np.atleast_1d(sigmoid(logits)))
    return np.concatenate(probs) if probs else np.zeros(0)


def validation_accuracy(rnet, dataset):
    """
    Fracción de pares con (compare >= 0.5) == label

    Empates en 0.5 cuentan como "alcanzable".
    """
    if dataset is None or len(dataset) == 0:
        raise UsageError("Dataset de validación vacío")
    predictions = (predict_pairs(rnet, dataset) >= RNET_DECISION_THRESHOLD).astype(np.int64)
    return float(accuracy_score(dataset.labels, predictions))


def pair_loss_and_grads(rnet, first, second, labels):
    """Pérdida logística media y gradientes de los parámetros entrenables"""
    logits, caches = pair_logits(rnet, first, second)
    losses, dlogits = logistic_loss(logits, labels)
    batch = len(labels)
    grads = pair_backward(rnet, caches, np.asarray(dlogits) / batch)
    return float(np.mean(losses)), grads


class RNetworkTrainer:
    """
    Entrenador de la R-network

    Mantiene el estado de Adam entre llamadas para el re-entrenamiento online (ECO).
    """

    def __init__(self, rnet, config, logger=None):
        self.rnet = rnet
        self.config = config
        self.logger = logger
        self.params = rnet.trainable_parameters()
        self.adam = AdamState.for_params(self.params) if self.params else None
        self.total_epochs = 0

    def send_log(self, message):
        """Envía mensaje al log"""
        if self.logger:
            self.logger.info(message)

    def fit(self, train, validation, epochs, rng):
        """
        Entrena epochs pasadas sobre train

        Returns:
            list: Filas de log {epoch, train_loss, validation_accuracy}
        """
        if len(train) == 0:
            raise UsageError("Dataset de entrenamiento vacío")

        log = []
        initial_loss = None
        batch_size = self.config.batch_size

        for _ in range(epochs):
            order = rng.permutation(len(train))
            epoch_losses = []
            for start in range(0, len(order), batch_size):
                idx = order[start:start + batch_size]
                loss, grads = pair_loss_and_grads(self.rnet, train.first[idx],
                                                  train.second[idx], train.labels[idx])
                if not np.isfinite(loss):
                    raise TrainingError("Pérdida no finita en la R-network",
                                        diagnostics={"epoch": self.total_epochs})
                epoch_losses.append(loss)
                if self.params:
                    adam_step(self.params, grads, self.adam, self.config.learning_rate)

            train_loss = float(np.mean(epoch_losses))
            if initial_loss is None:
                initial_loss = train_loss
            elif train_loss > RNET_DIVERGENCE_FACTOR * initial_loss:
                raise TrainingError(
                    f"R-network divergió: pérdida {train_loss:.4f} > "
                    f"{RNET_DIVERGENCE_FACTOR:.0f}x inicial {initial_loss:.4f}",
                    diagnostics={"epoch": self.total_epochs, "initial_loss": initial_loss,
                                 "train_loss": train_loss})

            self.total_epochs += 1
            row = {"epoch": self.total_epochs, "train_loss": train_loss,
                   "validation_accuracy": validation_accuracy(self.rnet, validation)
                   if validation is not None and len(validation) else float("nan")}
            log.append(row)

        self.rnet.trained = True
        if log:
            last = log[-1]
            self.send_log(f"🧠 R-network época {last['epoch']}: loss={last['train_loss']:.4f} "
                          f"val_acc={last['validation_accuracy']:.3f}")
        return log


def train_rnetwork(dataset, config, rng, validation=None, rnet=None, logger=None):
    """
    Entrena una R-network sobre un PairDataset

    Args:
        dataset: PairDataset de entrenamiento (balanceado)
        config: RNetConfig (batch, lr, épocas, switches de arquitectura)
        rng: np.random.Generator
        validation: PairDataset disjunto; si falta se separa un 10%
        rnet: Red existente a continuar; si falta se inicializa
        logger: Logger opcional

    Returns:
        tuple: (RNetwork, log por época)
    """
    config = config or RNetConfig()
    if dataset is None or len(dataset) == 0:
        raise UsageError("Dataset de pares vacío")

    if validation is None:
        dataset, validation = split_pairs(dataset, rng)

    if rnet is None:
        rnet = init_rnetwork(dataset.input_dim, config, rng)

    trainer = RNetworkTrainer(rnet, config, logger=logger)
    log = trainer.fit(dataset, validation, config.epochs, rng)
    return rnet, log
