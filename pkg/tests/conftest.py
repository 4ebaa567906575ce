"""Fixtures partagées par les tests."""
import sys
from pathlib import Path

import pytest
from hypothesis import settings

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT))

from core.logger import VsemLogger, set_vsem_logger  # noqa: E402
from utils.images import load_pgm  # noqa: E402

DATA_DIR = Path(__file__).resolve().parent / "data"

# Pas de délai par exemple : les chiffrements sont en Python pur
settings.register_profile("vsem", deadline=None)
settings.load_profile("vsem")


@pytest.fixture(autouse=True)
def quiet_logger():
    """Logger silencieux, remis en place après chaque test."""
    silent = VsemLogger(
        info_callback=lambda msg: None,
        warning_callback=lambda msg: None,
        error_callback=lambda msg: None,
    )
    set_vsem_logger(silent)
    yield silent
    set_vsem_logger(silent)


@pytest.fixture(scope="session")
def landscape():
    """Image naturelle 64x64 fournie avec les tests."""
    return load_pgm(DATA_DIR / "landscape.pgm")


@pytest.fixture
def vault_path(tmp_path):
    return tmp_path / "coffre.vsem"
