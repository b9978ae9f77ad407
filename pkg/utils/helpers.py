"""
╔══════════════════════════════════════════════════════════════════════════╗
║                     FUNCIONES AUXILIARES v1.0                            ║
╚══════════════════════════════════════════════════════════════════════════╝
"""

import os

import numpy as np

from config import WORKERS_ENV_VAR


def format_elapsed(seconds):
    """Formatea segundos a string legible"""
    minutes, secs = divmod(int(seconds), 60)
    hours, minutes = divmod(minutes, 60)
    if hours:
        return f"{hours}h{minutes:02d}m{secs:02d}s"
    return f"{minutes}m{secs:02d}s"


def format_mean_std(values, digits=2):
    """Formatea 'media ± std' como en las tablas de resultados"""
    values = np.asarray(values, dtype=np.float64)
    values = values[np.isfinite(values)]
    if len(values) == 0:
        return "nan"
    return f"{values.mean():.{digits}f} ± {values.std():.{digits}f}"


def seed_streams(seed, names):
    """
    Genera un RNG independiente por nombre a partir de una semilla

    Args:
        seed: Semilla base del run
        names: Nombres de los streams ('env', 'policy', ...)

    Returns:
        dict: nombre -> np.random.Generator
    """
    children = np.random.SeedSequence(int(seed)).spawn(len(names))
    return {name: np.random.default_rng(child) for name, child in zip(names, children)}


def worker_slots(default=1):
    """Número de workers desde la variable de entorno"""
    raw = os.environ.get(WORKERS_ENV_VAR, "")
    try:
        value = int(raw)
    except ValueError:
        return default
    return max(1, value)


def ensure_dir(path):
    """Crea carpeta si no existe"""
    if path and not os.path.exists(path):
        os.makedirs(path)
    return path
