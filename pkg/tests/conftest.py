from __future__ import annotations

from pathlib import Path

import pytest

from _nets import fig1_net, fig2_net

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def fig1():
    return fig1_net()


@pytest.fixture(scope="session")
def fig2():
    return fig2_net()


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR
