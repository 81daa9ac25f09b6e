import os
import pathlib

import pytest

ROOT = pathlib.Path(__file__).resolve().parents[2]


@pytest.fixture
def configs():
    return pathlib.Path(os.environ.get("QPC_CONFIGS", ROOT / "configs"))


@pytest.fixture
def schemas():
    return pathlib.Path(os.environ.get("QPC_SCHEMAS", ROOT / "schemas"))


@pytest.fixture
def qpc_bin():
    path = os.environ.get("QPC_BIN")
    if not path or not os.path.exists(path):
        pytest.skip("QPC_BIN not set")
    return path
