import logging
from pathlib import Path

import pytest

from src.algebra.utils import reset_budget

DATA_DIR = Path(__file__).parent / "golden" / "data"


@pytest.fixture(autouse=True)
def engine_budget():
    """Every test starts from the environment budget."""
    reset_budget()
    yield
    reset_budget()


@pytest.fixture(autouse=True)
def cli_log_handlers():
    """Drop the stderr handlers the CLI installs on the root logger."""
    yield
    root = logging.getLogger()
    for handler in root.handlers[:]:
        if type(handler) is logging.StreamHandler:
            root.removeHandler(handler)


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture
def system_text():
    def read(name: str) -> str:
        return (DATA_DIR / name).read_text(encoding="utf-8")

    return read
