"""
╔══════════════════════════════════════════════════════════════════════════╗
║                     JERARQUÍA DE ERRORES v1.0                            ║
╚══════════════════════════════════════════════════════════════════════════╝
"""


class WorkbenchError(Exception):
    """Error base del workbench"""


class ConfigurationError(WorkbenchError):
    """Configuración inválida: shapes, dimensiones, claves desconocidas"""


class UsageError(WorkbenchError):
    """Llamada fuera de contrato: cache obsoleto, acción inválida, etc."""


class GenerationError(WorkbenchError):
    """No se pudo generar un laberinto/spawn que cumpla las restricciones"""


class SchemaError(ConfigurationError):
    """CSV o selección de métricas que no cumple el esquema declarado"""


class TrainingError(WorkbenchError):
    """
    Entrenamiento abortado (gradientes no finitos, divergencia)

    Lleva un dict de diagnóstico para el registro de fallos por semilla.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
