"""
Métricas, resúmenes y gráficas de los experimentos
"""

from .metrics import (MetricsRow, METRIC_COLUMNS, VALUE_COLUMNS, SUMMARY_COLUMNS,
                      coverage_metric, metrics_frame, write_metrics_csv, read_metrics_csv,
                      write_csv, frame_to_csv_text, summarize_seeds, final_window, seed_means)
from .plots import emit_plots, binned_curves, build_figure

__all__ = [
    'MetricsRow', 'METRIC_COLUMNS', 'VALUE_COLUMNS', 'SUMMARY_COLUMNS',
    'coverage_metric', 'metrics_frame', 'write_metrics_csv', 'read_metrics_csv',
    'write_csv', 'frame_to_csv_text', 'summarize_seeds', 'final_window', 'seed_means',
    'emit_plots', 'binned_curves', 'build_figure'
]
