from pathlib import Path

import pytest

from models.instances import EgalMabInstance

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def paired_bernoulli() -> EgalMabInstance:
    """Two arms at 0.8 and two at 0.5."""
    return EgalMabInstance.bernoulli([0.8, 0.8, 0.5, 0.5])


@pytest.fixture
def three_gaussian() -> EgalMabInstance:
    return EgalMabInstance.gaussian([0.9, 0.5, 0.2], 1.0)


@pytest.fixture(autouse=True)
def _isolated_env(monkeypatch):
    for key in ("EGALBANDIT_THREADS", "EGALBANDIT_LOG_LEVEL"):
        monkeypatch.delenv(key, raising=False)
