"""
╔══════════════════════════════════════════════════════════════════════════╗
║                    CHECKPOINTS EN TEXTO (BIT-EXACTOS) v1.0               ║
║                                                                          ║
║  Línea 1: # curiosity-workbench checkpoint v1                           ║
║  Resto:   JSON con kind, switches de arquitectura y arrays              ║
║           (R-network: también los env steps de su fase offline)         ║
║           (cada float como float.hex → round-trip exacto)               ║
╚══════════════════════════════════════════════════════════════════════════╝
"""

import dataclasses
import json

import numpy as np

from config import CHECKPOINT_HEADER
from core.errors import ConfigurationError
from core.mlp import MLPParams
from rnet.network import RNetwork, RNetConfig, ComparatorKind
from agent.policy import PolicyParams


def _encode_array(array):
    array = np.asarray(array, dtype=np.float64)
    return {"shape": list(array.shape), "data": [float(v).hex() for v in array.reshape(-1)]}


def _decode_array(payload):
    values = [float.fromhex(v) for v in payload["data"]]
    return np.asarray(values, dtype=np.float64).reshape(payload["shape"])


def encode_mlp(params):
    return {
        "weights": [_encode_array(w) for w in params.weights],
        "biases": [_encode_array(b) for b in params.biases],
        "hidden_activations": list(params.hidden_activations),
        "output": params.output,
    }


def decode_mlp(payload):
    return MLPParams(weights=[_decode_array(w) for w in payload["weights"]],
                     biases=[_decode_array(b) for b in payload["biases"]],
                     hidden_activations=list(payload["hidden_activations"]),
                     output=payload["output"])


def _write(path, document):
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(CHECKPOINT_HEADER + "\n")
        json.dump(document, f, sort_keys=True)
        f.write("\n")
    return path


def _read(path, kind):
    with open(path, "r", encoding="utf-8") as f:
        header = f.readline().rstrip("\n")
        if header != CHECKPOINT_HEADER:
            raise ConfigurationError(f"{path}: cabecera de checkpoint desconocida {header!r}")
        try:
            document = json.loads(f.read())
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"{path}: checkpoint corrupto ({e})") from None
    if document.get("kind") != kind:
        raise ConfigurationError(f"{path}: checkpoint de tipo {document.get('kind')!r}, "
                                 f"se esperaba {kind!r}")
    return document


def save_rnetwork(rnet, path):
    cfg = rnet.config or RNetConfig()
    document = {
        "kind": "rnetwork",
        "shared": rnet.shared,
        "comparator": rnet.comparator.value,
        "embedding_dim": rnet.embedding_dim,
        "trained": rnet.trained,
        "offline_steps": int(rnet.offline_steps),
        "switches": {"k": cfg.k, "gap_multiplier": cfg.gap_multiplier, "hidden": cfg.hidden,
                     "train_embedding": cfg.train_embedding,
                     "train_comparator": cfg.train_comparator},
        "branch_a": encode_mlp(rnet.branch_a),
        "branch_b": None if rnet.shared else encode_mlp(rnet.branch_b),
        "comparator_params": None if rnet.comparator_params is None
        else encode_mlp(rnet.comparator_params),
    }
    return _write(path, document)


def load_rnetwork(path, config=None):
    """
    R-network desde checkpoint

    Args:
        path: Archivo de checkpoint
        config: RNetConfig del experimento (hiperparámetros de re-entrenamiento)
    """
    doc = _read(path, "rnetwork")
    branch_a = decode_mlp(doc["branch_a"])
    branch_b = branch_a if doc["shared"] else decode_mlp(doc["branch_b"])
    comparator = ComparatorKind(doc["comparator"])
    config = config or RNetConfig()
    if config.shared_branches != doc["shared"] or config.comparator != comparator:
        config = dataclasses.replace(config, shared_branches=bool(doc["shared"]),
                                     comparator=comparator)
    return RNetwork(branch_a=branch_a, branch_b=branch_b, comparator=comparator,
                    comparator_params=None if doc["comparator_params"] is None
                    else decode_mlp(doc["comparator_params"]),
                    embedding_dim=int(doc["embedding_dim"]), shared=bool(doc["shared"]),
                    trained=bool(doc["trained"]), config=config,
                    offline_steps=int(doc.get("offline_steps", 0)))


def save_policy(params, path):
    document = {"kind": "policy", "trunk": encode_mlp(params.trunk),
                "policy_head": encode_mlp(params.policy_head),
                "value_head": encode_mlp(params.value_head)}
    return _write(path, document)


def load_policy(path):
    doc = _read(path, "policy")
    return PolicyParams(trunk=decode_mlp(doc["trunk"]), policy_head=decode_mlp(doc["policy_head"]),
                        value_head=decode_mlp(doc["value_head"]))
