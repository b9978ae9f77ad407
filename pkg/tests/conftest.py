import numpy as np
import pytest

from utils.logger import WorkbenchLogger


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def quiet_logger():
    """Logger que acumula registros sin imprimir por debajo de ERROR"""
    return WorkbenchLogger(level="ERROR", log_to_file=False)
