import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from possifolio.model import load_fixture  # noqa: E402


@pytest.fixture(scope="session")
def table1():
    return load_fixture("table1")


@pytest.fixture(scope="session")
def table1_prose():
    return load_fixture("table1-prose")
