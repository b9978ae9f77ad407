"""
╔══════════════════════════════════════════════════════════════════════════╗
║                        SISTEMA DE LOGS v1.0                              ║
║                                                                          ║
║  stderr (stdout queda para los resultados de los comandos)              ║
║  Nivel mínimo configurable + copia opcional a archivo                   ║
╚══════════════════════════════════════════════════════════════════════════╝
"""

import os
import sys
from datetime import datetime

from config import LOG_LEVEL, LOG_TO_FILE, LOG_FILE_PATH


LEVELS = {"DEBUG": 10, "INFO": 20, "SUCCESS": 25, "WARNING": 30, "ERROR": 40}
MARKERS = {"DEBUG": "🔍 ", "INFO": "", "SUCCESS": "✅ ", "WARNING": "⚠️ ", "ERROR": "❌ "}


class WorkbenchLogger:
    """
    Logger inyectado en los componentes del workbench

    Guarda (nivel, mensaje) en records; los tests los inspeccionan sin capturar stderr.
    """

    def __init__(self, level=LOG_LEVEL, log_to_file=LOG_TO_FILE, log_file=LOG_FILE_PATH,
                 stream=None):
        self.level = LEVELS.get(str(level).upper(), LEVELS["INFO"])
        self.log_to_file = log_to_file
        self.log_file = log_file
        self.stream = stream
        self.records = []

        if self.log_to_file:
            folder = os.path.dirname(self.log_file)
            if folder:
                os.makedirs(folder, exist_ok=True)

    def _append_to_file(self, line):
        try:
            with open(self.log_file, "a", encoding="utf-8") as f:
                f.write(line + "\n")
        except OSError as e:
            print(f"No se pudo escribir {self.log_file}: {e}", file=sys.stderr)

    def log(self, message, level="INFO"):
        """
        Emite un mensaje si su nivel alcanza el mínimo

        Args:
            message: Texto ya marcado
            level: DEBUG, INFO, SUCCESS, WARNING o ERROR
        """
        if LEVELS.get(level, LEVELS["INFO"]) < self.level:
            return
        self.records.append((level, message))

        line = f"[{datetime.now():%H:%M:%S}] {message}"
        print(line, file=self.stream or sys.stderr)
        if self.log_to_file:
            self._append_to_file(line)

    def _marked(self, level, message):
        self.log(f"{MARKERS[level]}{message}", level)

    def info(self, message):
        self._marked("INFO", message)

    def warning(self, message):
        self._marked("WARNING", message)

    def error(self, message):
        self._marked("ERROR", message)

    def success(self, message):
        self._marked("SUCCESS", message)

    def debug(self, message):
        self._marked("DEBUG", message)
