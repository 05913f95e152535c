import os
import tempfile

# Logs go to a scratch directory; must be set before nodalparity creates its log file
os.environ.setdefault("NODAL_LOG_DIR", os.path.join(tempfile.gettempdir(), "nodalparity-test-logs"))

import numpy as np
import pytest

from nodalparity.components.spectra import TorusShape
from nodalparity.config.config import CountConfig


@pytest.fixture
def square_torus() -> TorusShape:
    return TorusShape.rational(1, 1)


@pytest.fixture
def third_torus() -> TorusShape:
    """rho = 1/sqrt(3), where odd counts occur."""
    return TorusShape.rational(1, 3)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(42)


@pytest.fixture
def quick_count() -> CountConfig:
    return CountConfig(base_resolution=64, max_resolution=512)


@pytest.fixture
def single_thread(monkeypatch):
    monkeypatch.setenv("NODAL_THREADS", "1")
