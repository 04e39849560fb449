import os
from pathlib import Path

import pytest

import evrpsolve as ev

# Point EVRP_DATA_DIR at a directory with the original benchmark files to run
# the acceptance suite against them instead of the bundled reconstructions.
DATA_DIR = Path(os.environ.get("EVRP_DATA_DIR", Path(__file__).parent / "data"))


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


def _load(name: str) -> ev.Instance:
    return ev.load_instance(str(DATA_DIR / name))


@pytest.fixture(scope="session")
def tiny() -> ev.Instance:
    return _load("tiny-two-customers.evrp")


@pytest.fixture(scope="session")
def e22() -> ev.Instance:
    return _load("E-n22-k4.evrp")


@pytest.fixture(scope="session")
def e23() -> ev.Instance:
    return _load("E-n23-k3.evrp")


@pytest.fixture(scope="session")
def e30() -> ev.Instance:
    return _load("E-n30-k3.evrp")


@pytest.fixture(scope="session")
def e51() -> ev.Instance:
    return _load("E-n51-k5.evrp")
