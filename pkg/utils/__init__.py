"""
Utilidades del workbench
"""

from .logger import WorkbenchLogger
from .helpers import format_elapsed, format_mean_std, seed_streams, worker_slots, ensure_dir

__all__ = ['WorkbenchLogger', 'format_elapsed', 'format_mean_std', 'seed_streams',
           'worker_slots', 'ensure_dir']
