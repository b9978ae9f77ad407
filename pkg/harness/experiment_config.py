"""
╔══════════════════════════════════════════════════════════════════════════╗
║                 CONFIGURACIÓN DE EXPERIMENTOS v1.0                       ║
║                                                                          ║
║  Archivo plano key = value:                                             ║
║    # comentario                                                          ║
║    include = base.cfg          (relativo al archivo que incluye)        ║
║    method = PPO+EC                                                       ║
║    task.task = NoReward        bonus.alpha = 0.03       rnet.k = 5      ║
║  Claves desconocidas → ConfigurationError                               ║
╚══════════════════════════════════════════════════════════════════════════╝
"""

import dataclasses
import os
from dataclasses import dataclass, field
from enum import Enum

from config import TOTAL_BUDGET, DEFAULT_SEEDS, OUTPUT_DIR, GRID_ORACLE_CELL_SIZE, \
    GRID_ORACLE_WEIGHT
from core.errors import ConfigurationError
from envs.tasks import TaskConfig
from curiosity.bonus import Aggregation, BonusConfig
from agent.ppo import PPOConfig
from rnet.network import RNetConfig
from baselines.icm import ICMConfig


class Method(Enum):
    PPO = "PPO"
    PPO_ICM = "PPO+ICM"
    PPO_EC = "PPO+EC"
    PPO_ECO = "PPO+ECO"
    PPO_GRID_ORACLE = "PPO+GridOracle"

    @property
    def uses_rnet(self):
        return self in (Method.PPO_EC, Method.PPO_ECO)


@dataclass
class ExperimentConfig:
    method: Method = Method.PPO_EC
    task: TaskConfig = field(default_factory=TaskConfig)
    bonus: BonusConfig = field(default_factory=BonusConfig)
    ppo: PPOConfig = field(default_factory=PPOConfig)
    rnet: RNetConfig = field(default_factory=RNetConfig)
    icm: ICMConfig = field(default_factory=ICMConfig)
    grid_cell_size: int = GRID_ORACLE_CELL_SIZE
    grid_weight: float = GRID_ORACLE_WEIGHT
    total_budget: int = TOTAL_BUDGET
    seeds: list = field(default_factory=lambda: list(DEFAULT_SEEDS))
    output_dir: str = OUTPUT_DIR
    name: str = "experiment"
    log_bonus_steps: bool = False
    dump_trajectories: bool = False

    def validate(self):
        self.task.validate()
        if self.total_budget <= 0:
            raise ConfigurationError("total_budget debe ser positivo")
        if not self.seeds:
            raise ConfigurationError("La lista de seeds está vacía")
        if self.method == Method.PPO_EC and not self.rnet.checkpoint \
                and self.rnet.offline_budget <= 0:
            raise ConfigurationError("PPO+EC requiere rnet.checkpoint o rnet.offline_budget > 0")
        if self.method == Method.PPO_EC and self.rnet.offline_budget >= self.total_budget \
                and not self.rnet.checkpoint:
            raise ConfigurationError("rnet.offline_budget consume todo el presupuesto")
        return self

    def to_lines(self):
        """Config completamente resuelta en formato key = value"""
        lines = []
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if f.name in SECTIONS:
                for sub in dataclasses.fields(value):
                    lines.append(f"{f.name}.{sub.name} = {format_value(getattr(value, sub.name))}")
            else:
                lines.append(f"{f.name} = {format_value(value)}")
        return lines

    def replace(self, **changes):
        """Copia con cambios; admite claves con punto ('rnet.k')"""
        return apply_overrides(self, changes)


SECTIONS = {
    "task": TaskConfig,
    "bonus": BonusConfig,
    "ppo": PPOConfig,
    "rnet": RNetConfig,
    "icm": ICMConfig,
}


def format_value(value):
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, Aggregation):
        return value.label()
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (list, tuple)):
        return ", ".join(str(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse_enum(enum_cls, raw, key):
    text = raw.strip()
    for member in enum_cls:
        if text.lower() in (member.value.lower(), member.name.lower()):
            return member
    options = ", ".join(m.value for m in enum_cls)
    raise ConfigurationError(f"Valor {raw!r} inválido para {key}; opciones: {options}")


def parse_value(raw, field_type, key):
    """Convierte el texto según el tipo del campo"""
    if not isinstance(raw, str):
        return raw
    text = raw.strip()
    try:
        if field_type is bool:
            lowered = text.lower()
            if lowered in ("true", "1", "yes", "on"):
                return True
            if lowered in ("false", "0", "no", "off"):
                return False
            raise ValueError(text)
        if field_type is int:
            return int(text.replace("_", ""))
        if field_type is float:
            return float(text.replace("_", ""))
        if field_type is list:
            return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigurationError(f"Valor {raw!r} inválido para {key}") from None
    if isinstance(field_type, type) and issubclass(field_type, Enum):
        return _parse_enum(field_type, text, key)
    if field_type is Aggregation:
        return Aggregation.parse(text)
    return text


def _field_types(cls):
    return {f.name: f.type for f in dataclasses.fields(cls)}


def apply_overrides(config, overrides):
    """
    Aplica un dict {clave: valor} (claves con punto para secciones)

    Returns:
        ExperimentConfig nuevo
    """
    top_types = _field_types(ExperimentConfig)
    top_changes = {}
    section_changes = {name: {} for name in SECTIONS}

    for key, raw in overrides.items():
        section, dot, name = key.partition(".")
        if dot:
            if section not in SECTIONS:
                raise ConfigurationError(f"Clave desconocida: {key}")
            types = _field_types(SECTIONS[section])
            if name not in types:
                raise ConfigurationError(f"Clave desconocida: {key}")
            section_changes[section][name] = parse_value(raw, types[name], key)
        else:
            if key not in top_types or key in SECTIONS:
                raise ConfigurationError(f"Clave desconocida: {key}")
            top_changes[key] = parse_value(raw, top_types[key], key)

    for section, changes in section_changes.items():
        if changes:
            top_changes[section] = dataclasses.replace(getattr(config, section), **changes)
    return dataclasses.replace(config, **top_changes)


def read_config_lines(path, _stack=None):
    """
    Lee pares (clave, valor) en orden, resolviendo includes

    Raises:
        ConfigurationError: Línea mal formada, include cíclico o archivo inexistente
    """
    path = os.path.abspath(path)
    stack = list(_stack or [])
    if path in stack:
        chain = " → ".join(os.path.basename(p) for p in stack + [path])
        raise ConfigurationError(f"Include cíclico: {chain}")
    if not os.path.exists(path):
        raise ConfigurationError(f"Archivo de configuración no encontrado: {path}")

    pairs = []
    with open(path, "r", encoding="utf-8") as f:
        for number, line in enumerate(f, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            if "=" not in text:
                raise ConfigurationError(f"{os.path.basename(path)}:{number}: se esperaba key = value")
            key, value = (part.strip() for part in text.split("=", 1))
            if key == "include":
                included = os.path.join(os.path.dirname(path), value)
                pairs.extend(read_config_lines(included, stack + [path]))
            else:
                pairs.append((key, value))
    return pairs


def load_config(path):
    """ExperimentConfig desde archivo; las claves posteriores ganan"""
    overrides = {}
    for key, value in read_config_lines(path):
        overrides[key] = value
    return apply_overrides(ExperimentConfig(), overrides).validate()


def write_resolved_config(config, path):
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write("\n".join(config.to_lines()) + "\n")
    return path
