"""
╔══════════════════════════════════════════════════════════════════════════╗
║                   MEMORIA EPISÓDICA DE EMBEDDINGS v1.0                   ║
║                                                                          ║
║  - Capacidad K, se vacía al final de cada episodio                      ║
║  - Memoria llena → sustituye un elemento uniforme al azar               ║
║  - RNG propio, independiente del de la política                         ║
╚══════════════════════════════════════════════════════════════════════════╝
"""

import numpy as np

from config import EC_MEMORY_SIZE
from core.errors import ConfigurationError


class EpisodicMemory:
    """Buffer de embeddings de capacidad fija"""

    def __init__(self, capacity=EC_MEMORY_SIZE, rng=None):
        if capacity < 1:
            raise ConfigurationError("La capacidad de la memoria debe ser >= 1")
        self.capacity = int(capacity)
        self.rng = rng if rng is not None else np.random.default_rng()
        self.entries = []
        self.evictions = 0

    def __len__(self):
        return len(self.entries)

    @property
    def is_full(self):
        return len(self.entries) >= self.capacity

    def add(self, embedding, rng=None):
        """
        Inserta un embedding

        Args:
            embedding: Vector a guardar (se copia)
            rng: Generador para el desalojo; por defecto el de la memoria

        Returns:
            int | None: Índice sustituido si la memoria estaba llena
        """
        embedding = np.array(embedding, dtype=np.float64, copy=True)
        if self.entries and embedding.shape != self.entries[0].shape:
            raise ConfigurationError(
                f"Embedding {embedding.shape} no coincide con la memoria {self.entries[0].shape}")

        if not self.is_full:
            self.entries.append(embedding)
            return None

        rng = rng if rng is not None else self.rng
        index = int(rng.integers(0, self.capacity))
        self.entries[index] = embedding
        self.evictions += 1
        return index

    def as_array(self):
        """Entradas apiladas (M, ...) para comparaciones vectorizadas"""
        if not self.entries:
            return None
        return np.stack(self.entries)

    def clear(self):
        """Vacía la memoria; el RNG continúa su secuencia"""
        self.entries = []
