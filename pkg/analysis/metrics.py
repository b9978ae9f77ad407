"""
╔══════════════════════════════════════════════════════════════════════════╗
║                  MÉTRICAS POR EPISODIO Y RESUMEN v1.0                    ║
║                                                                          ║
║  - metrics.csv con cabecera de esquema versionada                       ║
║  - Cobertura = celdas distintas (⌊x/c⌋, ⌊y/c⌋) del episodio             ║
║  - summary.csv: medias de la ventana final por semilla + media ± std    ║
║  - Floats con formato fijo → bytes idénticos entre corridas             ║
╚══════════════════════════════════════════════════════════════════════════╝
"""

import io
from dataclasses import dataclass, asdict, fields

import numpy as np
import pandas as pd

from config import METRICS_SCHEMA, CSV_FLOAT_FORMAT, FINAL_WINDOW_FRACTION
from core.errors import SchemaError
from utils.helpers import format_mean_std


@dataclass
class MetricsRow:
    """Una fila por episodio terminado"""
    method: str
    seed: int
    episode: int
    env_step: int
    task_reward: float
    coverage: int
    goal_contacts: int
    mean_bonus: float
    insertions: int
    tv_switch_fraction: float
    fire_fraction: float
    rnet_accuracy: float = float("nan")


METRIC_COLUMNS = [f.name for f in fields(MetricsRow)]
KEY_COLUMNS = ["method", "seed", "episode", "env_step"]
VALUE_COLUMNS = [c for c in METRIC_COLUMNS if c not in KEY_COLUMNS]

SUMMARY_COLUMNS = ["method", "seed", "status", "truncated", "env_steps", "pretrained_env_steps",
                   "episodes", *VALUE_COLUMNS, "error"]


def coverage_metric(positions, cell_size=1):
    """Número de celdas distintas visitadas por una trayectoria de posiciones"""
    cells = {(int(x) // cell_size, int(y) // cell_size) for x, y in positions}
    return len(cells)


def _schema_line(schema):
    return f"# schema={schema}\n"


def frame_to_csv_text(frame, schema=None):
    """Texto CSV determinista (formato de float fijo, saltos de línea \\n)"""
    buffer = io.StringIO()
    if schema:
        buffer.write(_schema_line(schema))
    frame.to_csv(buffer, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
    return buffer.getvalue()


def write_csv(frame, path, schema=None):
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(frame_to_csv_text(frame, schema))
    return path


def metrics_frame(rows):
    """DataFrame ordenado (method, seed, episode) con las columnas del esquema"""
    frame = pd.DataFrame([asdict(r) if isinstance(r, MetricsRow) else dict(r) for r in rows],
                         columns=METRIC_COLUMNS)
    if len(frame):
        frame = frame.sort_values(["method", "seed", "episode"], kind="mergesort")
    return frame.reset_index(drop=True)


def write_metrics_csv(rows, path):
    return write_csv(metrics_frame(rows), path, schema=METRICS_SCHEMA)


def read_metrics_csv(path, required=METRIC_COLUMNS):
    """
    Lee un metrics.csv validando cabecera y columnas

    Raises:
        SchemaError: Cabecera distinta o columna faltante (nombrada en el mensaje)
    """
    with open(path, "r", encoding="utf-8") as f:
        first = f.readline()
    if first != _schema_line(METRICS_SCHEMA):
        raise SchemaError(f"{path}: cabecera de esquema {first.strip()!r}, "
                          f"se esperaba '# schema={METRICS_SCHEMA}'")

    frame = pd.read_csv(path, skiprows=1)
    missing = [c for c in required if c not in frame.columns]
    if missing:
        raise SchemaError(f"{path}: falta la columna {missing[0]!r}; "
                          f"disponibles: {', '.join(frame.columns)}")
    return frame


def final_window(frame, fraction=FINAL_WINDOW_FRACTION):
    """Último fraction de los episodios (al menos uno)"""
    count = max(1, int(np.ceil(len(frame) * fraction)))
    return frame.sort_values("episode", kind="mergesort").tail(count)


def summarize_seeds(frame, seed_status=None, fraction=FINAL_WINDOW_FRACTION):
    """
    Resumen por semilla + fila agregada por método

    Args:
        frame: DataFrame de métricas
        seed_status: dict (method, seed) -> {status, truncated, env_steps,
            pretrained_env_steps, error}
        fraction: Ventana final

    Returns:
        pd.DataFrame con SUMMARY_COLUMNS
    """
    seed_status = seed_status or {}
    keys = set(seed_status)
    if len(frame):
        keys |= set(zip(frame["method"], frame["seed"]))

    rows = []
    for method, seed in sorted(keys):
        status = seed_status.get((method, seed), {})
        episodes = frame[(frame["method"] == method) & (frame["seed"] == seed)] \
            if len(frame) else frame
        window = final_window(episodes, fraction) if len(episodes) else episodes
        row = {"method": method, "seed": str(seed),
               "status": status.get("status", "ok"),
               "truncated": bool(status.get("truncated", False)),
               "env_steps": int(status.get("env_steps", 0)),
               "pretrained_env_steps": int(status.get("pretrained_env_steps", 0)),
               "episodes": len(episodes),
               "error": status.get("error", "")}
        for column in VALUE_COLUMNS:
            values = window[column].to_numpy(dtype=np.float64) if len(window) else np.zeros(0)
            values = values[np.isfinite(values)]
            row[column] = float(values.mean()) if len(values) else float("nan")
        rows.append(row)

    per_seed = pd.DataFrame(rows, columns=SUMMARY_COLUMNS)
    aggregates = []
    for method in sorted(per_seed["method"].unique()):
        ok = per_seed[(per_seed["method"] == method) & (per_seed["status"] == "ok")]
        agg = {"method": method, "seed": "mean±std", "status": f"{len(ok)} ok",
               "truncated": bool(ok["truncated"].any()) if len(ok) else False,
               "env_steps": int(ok["env_steps"].sum()) if len(ok) else 0,
               "pretrained_env_steps": int(ok["pretrained_env_steps"].sum()) if len(ok) else 0,
               "episodes": int(ok["episodes"].sum()) if len(ok) else 0, "error": ""}
        for column in VALUE_COLUMNS:
            agg[column] = format_mean_std(ok[column].to_numpy(dtype=np.float64), digits=4)
        aggregates.append(agg)

    return pd.concat([per_seed, pd.DataFrame(aggregates, columns=SUMMARY_COLUMNS)],
                     ignore_index=True)


def seed_means(summary, column):
    """Valores por semilla (sin la fila agregada) de una columna del resumen"""
    rows = summary[(summary["seed"] != "mean±std") & (summary["status"] == "ok")]
    return rows[column].astype(float).to_numpy()
