"""
╔══════════════════════════════════════════════════════════════════════════╗
║                    GRÁFICAS DE ENTRENAMIENTO (SVG) v1.0                  ║
║                                                                          ║
║  x = env steps agrupados en bins, una línea por método                  ║
║  Media por semilla y bin → media ± std entre semillas (sombreado)       ║
║  Bytes deterministas: svg.hashsalt fijo y sin fecha en metadatos        ║
╚══════════════════════════════════════════════════════════════════════════╝
"""

import os

import matplotlib
matplotlib.use("Agg")
from matplotlib.figure import Figure
import numpy as np
import pandas as pd

from config import PLOT_BINS
from core.errors import SchemaError
from analysis.metrics import read_metrics_csv, VALUE_COLUMNS

DEFAULT_PLOT_METRICS = ["coverage", "task_reward"]
METHOD_COLORS = ['#00aaff', '#00ff88', '#ff6b6b', '#ffd93d', '#c77dff', '#ff9f1c']

METRIC_LABELS = {
    "task_reward": "Reward de tarea por episodio",
    "coverage": "Cobertura (celdas distintas)",
    "goal_contacts": "Contactos con la meta",
    "mean_bonus": "Bonus medio",
    "insertions": "Inserciones en memoria",
    "tv_switch_fraction": "Fracción de acciones TV",
    "fire_fraction": "Fracción de acciones fire",
    "rnet_accuracy": "Accuracy de la R-network",
}


def binned_curves(frame, metric, bins=PLOT_BINS):
    """
    Curvas media ± std por método

    Returns:
        dict: method -> (x centros, media, std, n semillas)
    """
    max_step = float(frame["env_step"].max()) if len(frame) else 0.0
    edges = np.linspace(0.0, max(max_step, 1.0), bins + 1)
    centers = 0.5 * (edges[:-1] + edges[1:])

    data = frame[["method", "seed", "env_step", metric]].copy()
    data["bin"] = np.clip(np.digitize(data["env_step"], edges[1:-1], right=True), 0, bins - 1)
    data = data[np.isfinite(data[metric].astype(float))]

    per_seed = data.groupby(["method", "seed", "bin"], sort=True)[metric].mean().reset_index()
    curves = {}
    for method, group in per_seed.groupby("method", sort=True):
        stats = group.groupby("bin", sort=True)[metric].agg(["mean", "std", "count"])
        stats["std"] = stats["std"].fillna(0.0)
        curves[method] = (centers[stats.index.to_numpy()], stats["mean"].to_numpy(),
                          stats["std"].to_numpy(), int(group["seed"].nunique()))
    return curves


def _resolve_metrics(metrics, available):
    if metrics is None:
        metrics = DEFAULT_PLOT_METRICS
    metrics = list(metrics)
    if not metrics:
        raise SchemaError(f"No se eligió ninguna métrica; disponibles: {', '.join(available)}")
    for metric in metrics:
        if metric not in available:
            raise SchemaError(f"Métrica desconocida {metric!r}; disponibles: {', '.join(available)}")
    return metrics


def _output_paths(output_path, metrics):
    if len(metrics) == 1:
        return {metrics[0]: output_path}
    stem, ext = os.path.splitext(output_path)
    return {m: f"{stem}_{m}{ext or '.svg'}" for m in metrics}


def build_figure(frame, metric, bins=PLOT_BINS):
    """Figure de matplotlib de una métrica (sin guardar)"""
    fig = Figure(figsize=(7.5, 4.5), dpi=80, facecolor='#2d2d2d')
    ax = fig.add_subplot(111)
    ax.set_facecolor('#1e1e1e')

    for i, (method, (x, mean, std, seeds)) in enumerate(binned_curves(frame, metric, bins).items()):
        color = METHOD_COLORS[i % len(METHOD_COLORS)]
        ax.plot(x, mean, color=color, linewidth=2, label=method)
        if seeds > 1:
            ax.fill_between(x, mean - std, mean + std, color=color, alpha=0.2, linewidth=0)

    ax.set_xlabel('Env steps', color='white', fontsize=9)
    ax.set_ylabel(METRIC_LABELS.get(metric, metric), color='white', fontsize=9)
    ax.set_title(METRIC_LABELS.get(metric, metric), color='#00ff00', fontsize=10, fontweight='bold')
    ax.tick_params(colors='white', labelsize=8)
    ax.grid(True, alpha=0.2, color='white', linestyle=':')
    ax.legend(loc='best', fontsize=8)
    fig.tight_layout()
    return fig


def save_svg(fig, path):
    with matplotlib.rc_context({"svg.hashsalt": "curiosity-workbench"}):
        fig.savefig(path, format="svg", metadata={"Date": None}, facecolor=fig.get_facecolor())
    return path


def emit_plots(csv_paths, output_path, metrics=None, bins=PLOT_BINS, logger=None):
    """
    Genera un SVG por métrica a partir de uno o varios metrics.csv

    Args:
        csv_paths: Lista de rutas metrics.csv (esquema validado)
        output_path: SVG destino; con varias métricas → <stem>_<métrica>.svg
        metrics: Columnas a graficar (None → cobertura y reward)
        bins: Número de bins de env steps

    Returns:
        list: Rutas SVG escritas
    """
    if isinstance(csv_paths, str):
        csv_paths = [csv_paths]
    metrics = _resolve_metrics(metrics, VALUE_COLUMNS)

    frame = pd.concat([read_metrics_csv(p) for p in csv_paths], ignore_index=True)
    frame = frame.sort_values(["method", "seed", "episode"], kind="mergesort")

    written = []
    for metric, path in _output_paths(output_path, metrics).items():
        written.append(save_svg(build_figure(frame, metric, bins), path))
        if logger:
            logger.success(f"Gráfica guardada: {path}")
    return written
