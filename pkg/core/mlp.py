"""
╔══════════════════════════════════════════════════════════════════════════╗
║                 MLP DENSO: FORWARD / BACKWARD v1.0                       ║
║                                                                          ║
║  Maquinaria mínima para entrenar todas las redes del workbench          ║
║  - Capas densas h = x @ W + b, W con shape (fan_in, fan_out)            ║
║  - Activaciones ocultas: relu | identity                                ║
║  - Transformación de salida: identity | sigmoid | softmax | relu        ║
║  - float64 en todo                                                      ║
╚══════════════════════════════════════════════════════════════════════════╝
"""

from dataclasses import dataclass, field

import numpy as np

from core.errors import ConfigurationError, UsageError
from core.losses import sigmoid, softmax


HIDDEN_ACTIVATIONS = ("relu", "identity")
OUTPUT_TRANSFORMS = ("identity", "sigmoid", "softmax", "relu")


def as_tensor(values, name="tensor"):
    """Convierte a float64 y rechaza entradas no finitas"""
    array = np.asarray(values, dtype=np.float64)
    if not np.all(np.isfinite(array)):
        raise ConfigurationError(f"{name} contiene valores no finitos")
    return array


@dataclass
class MLPParams:
    """
    Parámetros de un MLP

    weights[i] tiene shape (in_i, out_i); biases[i] shape (out_i,).
    hidden_activations tiene una entrada por capa oculta (len(weights) - 1).
    """
    weights: list
    biases: list
    hidden_activations: list
    output: str = "identity"
    version: int = 0

    def __post_init__(self):
        if len(self.weights) == 0 or len(self.weights) != len(self.biases):
            raise ConfigurationError("MLP requiere al menos una capa y un bias por capa")
        if len(self.hidden_activations) != len(self.weights) - 1:
            raise ConfigurationError(
                f"Se esperaban {len(self.weights) - 1} activaciones ocultas, "
                f"recibidas {len(self.hidden_activations)}")
        for act in self.hidden_activations:
            if act not in HIDDEN_ACTIVATIONS:
                raise ConfigurationError(f"Activación oculta desconocida: {act}")
        if self.output not in OUTPUT_TRANSFORMS:
            raise ConfigurationError(f"Transformación de salida desconocida: {self.output}")
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.ndim != 2 or b.shape != (w.shape[1],):
                raise ConfigurationError(f"Capa {i}: shapes W={w.shape} b={b.shape} inconsistentes")
            if i > 0 and self.weights[i - 1].shape[1] != w.shape[0]:
                raise ConfigurationError(
                    f"Capa {i}: entrada {w.shape[0]} no compone con salida "
                    f"{self.weights[i - 1].shape[1]}")

    @property
    def input_dim(self):
        return self.weights[0].shape[0]

    @property
    def output_dim(self):
        return self.weights[-1].shape[1]

    @property
    def layer_sizes(self):
        return [self.input_dim] + [w.shape[1] for w in self.weights]

    def arrays(self):
        """Arrays de parámetros en orden [W0, b0, W1, b1, ...]"""
        out = []
        for w, b in zip(self.weights, self.biases):
            out.extend([w, b])
        return out

    def zeros_like(self):
        return MLPGrads(weights=[np.zeros_like(w) for w in self.weights],
                        biases=[np.zeros_like(b) for b in self.biases])

    def copy(self):
        return MLPParams(weights=[w.copy() for w in self.weights],
                         biases=[b.copy() for b in self.biases],
                         hidden_activations=list(self.hidden_activations),
                         output=self.output)


@dataclass
class MLPGrads:
    """Gradientes con la misma estructura que MLPParams"""
    weights: list
    biases: list

    def arrays(self):
        out = []
        for w, b in zip(self.weights, self.biases):
            out.extend([w, b])
        return out

    def add(self, other):
        """Suma in-place (ramas compartidas usadas dos veces)"""
        for i in range(len(self.weights)):
            self.weights[i] += other.weights[i]
            self.biases[i] += other.biases[i]
        return self


@dataclass
class MLPCache:
    """Registro de activaciones de un forward"""
    params_id: int
    version: int
    batched: bool
    inputs: list = field(default_factory=list)
    pre_activations: list = field(default_factory=list)
    output: np.ndarray = None


def init_mlp(layer_sizes, rng, hidden_activation="relu", output="identity"):
    """
    Inicializa un MLP con uniforme ±√(6/(fan_in+fan_out))

    Args:
        layer_sizes: [entrada, oculta_1, ..., salida]
        rng: np.random.Generator del run
        hidden_activation: Activación de todas las capas ocultas
        output: Transformación de salida

    Returns:
        MLPParams
    """
    if len(layer_sizes) < 2 or any(int(s) <= 0 for s in layer_sizes):
        raise ConfigurationError(f"Tamaños de capa inválidos: {layer_sizes}")

    weights, biases = [], []
    for fan_in, fan_out in zip(layer_sizes[:-1], layer_sizes[1:]):
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-limit, limit, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))

    return MLPParams(weights=weights, biases=biases,
                     hidden_activations=[hidden_activation] * (len(layer_sizes) - 2),
                     output=output)


def _activate(z, kind):
    if kind == "relu":
        return np.maximum(z, 0.0)
    if kind == "sigmoid":
        return sigmoid(z)
    if kind == "softmax":
        return softmax(z)
    return z


def mlp_forward(params, x):
    """
    Forward de un MLP

    Args:
        params: MLPParams
        x: (d,) o (B, d)

    Returns:
        tuple: (output, cache)
    """
    x = np.asarray(x, dtype=np.float64)
    batched = x.ndim == 2
    h = np.atleast_2d(x)
    if h.ndim != 2 or h.shape[1] != params.input_dim:
        raise ConfigurationError(
            f"Entrada con shape {x.shape} no coincide con dimensión {params.input_dim}")

    cache = MLPCache(params_id=id(params), version=params.version, batched=batched)
    last = len(params.weights) - 1
    for i, (w, b) in enumerate(zip(params.weights, params.biases)):
        cache.inputs.append(h)
        z = h @ w + b
        cache.pre_activations.append(z)
        kind = params.hidden_activations[i] if i < last else params.output
        h = _activate(z, kind)

    cache.output = h
    output = h if batched else h[0]
    return output, cache


def _activation_backward(kind, z, out, grad):
    if kind == "relu":
        return grad * (z > 0)
    if kind == "sigmoid":
        return grad * out * (1.0 - out)
    if kind == "softmax":
        return out * (grad - (grad * out).sum(axis=-1, keepdims=True))
    return grad


def mlp_backward(params, cache, output_grad):
    """
    Backward de un MLP

    Args:
        params: MLPParams usados en el forward
        cache: MLPCache del forward correspondiente
        output_grad: dL/d(output), mismo shape que la salida

    Returns:
        tuple: (MLPGrads, input_grad)
    """
    if cache is None or cache.params_id != id(params) or cache.version != params.version:
        raise UsageError("Cache obsoleto o de otra red: repetir el forward")

    grad = np.asarray(output_grad, dtype=np.float64)
    grad = grad if cache.batched else grad[None, :]
    if grad.shape != cache.output.shape:
        raise UsageError(f"Gradiente de salida {grad.shape} no coincide con {cache.output.shape}")

    grads = params.zeros_like()
    last = len(params.weights) - 1
    for i in range(last, -1, -1):
        kind = params.hidden_activations[i] if i < last else params.output
        out = cache.output if i == last else cache.inputs[i + 1]
        dz = _activation_backward(kind, cache.pre_activations[i], out, grad)
        grads.weights[i] = cache.inputs[i].T @ dz
        grads.biases[i] = dz.sum(axis=0)
        grad = dz @ params.weights[i].T

    input_grad = grad if cache.batched else grad[0]
    return grads, input_grad
