"""
╔══════════════════════════════════════════════════════════════════════════╗
║                       SUITES DE ABLACIÓN v1.0                            ║
║                                                                          ║
║  threshold_k · memory_size · rnet_budget · random_embedding ·           ║
║  branch_sharing · rnet_transfer · randomized_tv                          ║
║  Cada setting varía un único knob; el resto queda en los defaults       ║
║  Salida: ablation_<suite>.csv (suite, setting + filas del resumen)      ║
╚══════════════════════════════════════════════════════════════════════════╝
"""

import os

import pandas as pd

from config import (ABLATION_THRESHOLD_K, ABLATION_MEMORY_SIZE, ABLATION_RNET_BUDGET,
                    ABLATION_TV_IMAGES)
from core.errors import UsageError
from analysis.metrics import write_csv
from harness.experiment_config import Method
from harness.runner import run_experiment, train_rnet_only
from utils.helpers import ensure_dir


def _threshold_k(base):
    return [(f"k={k}", base.replace(**{"method": Method.PPO_EC, "rnet.k": k}))
            for k in ABLATION_THRESHOLD_K]


def _memory_size(base):
    return [(f"K={size}", base.replace(**{"method": Method.PPO_EC, "bonus.capacity": size}))
            for size in ABLATION_MEMORY_SIZE]


def _rnet_budget(base):
    return [(f"budget={budget}", base.replace(**{"method": Method.PPO_EC,
                                                 "rnet.offline_budget": budget}))
            for budget in ABLATION_RNET_BUDGET]


def _random_embedding(base):
    ec = base.replace(method=Method.PPO_EC)
    return [
        ("full_ec", ec),
        ("random_embedding", ec.replace(**{"rnet.train_embedding": False})),
        ("no_comparator", ec.replace(**{"rnet.comparator": "dot_sigmoid",
                                        "rnet.shared_branches": True,
                                        "rnet.train_embedding": False})),
        ("ppo", base.replace(method=Method.PPO)),
    ]


def _branch_sharing(base):
    ec = base.replace(method=Method.PPO_EC)
    return [("shared", ec.replace(**{"rnet.shared_branches": True})),
            ("unshared", ec.replace(**{"rnet.shared_branches": False}))]


def _rnet_transfer(base, logger=None):
    """R-network entrenada en otra familia de laberintos (tamaño y texturas)"""
    source = base.replace(**{
        "method": Method.PPO_EC,
        "task.maze_width": max(base.task.maze_width - 4, 7),
        "task.maze_height": max(base.task.maze_height - 4, 7),
        "task.texture_count": max(base.task.texture_count // 2, 1),
        "output_dir": os.path.join(base.output_dir, "ablation_rnet_transfer", "source_rnet"),
    })
    checkpoint, _ = train_rnet_only(source, logger=logger)
    ec = base.replace(method=Method.PPO_EC)
    return [("same_family", ec),
            ("transfer", ec.replace(**{"rnet.checkpoint": checkpoint}))]


def _randomized_tv(base):
    variants = [("None", {"task.tv_variant": "None"})]
    variants += [(f"ImageAction{k}", {"task.tv_variant": "ImageAction", "task.tv_images": k})
                 for k in ABLATION_TV_IMAGES]
    variants += [("Noise", {"task.tv_variant": "Noise"}),
                 ("NoiseAction", {"task.tv_variant": "NoiseAction"})]
    methods = [Method.PPO, Method.PPO_ICM, Method.PPO_EC, Method.PPO_ECO]

    settings = []
    for tv_name, changes in variants:
        for method in methods:
            settings.append((f"{tv_name}/{method.value}",
                             base.replace(**{"method": method, "task.task": "Sparse", **changes})))
    return settings


SUITES = {
    "threshold_k": _threshold_k,
    "memory_size": _memory_size,
    "rnet_budget": _rnet_budget,
    "random_embedding": _random_embedding,
    "branch_sharing": _branch_sharing,
    "rnet_transfer": _rnet_transfer,
    "randomized_tv": _randomized_tv,
}


def suite_settings(suite, base, logger=None):
    """Lista de (setting, ExperimentConfig) de una suite"""
    if suite not in SUITES:
        raise UsageError(f"Suite desconocida {suite!r}; suites: {', '.join(SUITES)}")
    builder = SUITES[suite]
    if suite == "rnet_transfer":
        return builder(base, logger=logger)
    return builder(base)


def _setting_dir(setting):
    return setting.replace("/", "_").replace("=", "").replace("+", "_")


def run_ablation(suite, base, logger=None, workers=None):
    """
    Barre una suite y escribe ablation_<suite>.csv en el output_dir base

    Returns:
        tuple: (ruta del CSV, DataFrame)
    """
    settings = suite_settings(suite, base, logger=logger)
    suite_dir = ensure_dir(os.path.join(base.output_dir, f"ablation_{suite}"))

    frames = []
    for setting, config in settings:
        if logger:
            logger.info(f"🧪 Ablación {suite}: {setting}")
        config = config.replace(output_dir=os.path.join(suite_dir, _setting_dir(setting)),
                                name=f"{suite}/{setting}")
        result = run_experiment(config, logger=logger, workers=workers)
        frame = result.summary.copy()
        frame.insert(0, "setting", setting)
        frame.insert(0, "suite", suite)
        frames.append(frame)

    table = pd.concat(frames, ignore_index=True)
    path = write_csv(table, os.path.join(ensure_dir(base.output_dir), f"ablation_{suite}.csv"))
    if logger:
        logger.success(f"Ablación {suite}: {len(settings)} settings → {path}")
    return path, table
