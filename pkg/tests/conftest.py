import pathlib

import pytest

from trinebell import make_phi_plus, trine_bases, uniform_triplet_model

REPO_ROOT = pathlib.Path(__file__).resolve().parent.parent
MODELS_DIR = REPO_ROOT / "models"


@pytest.fixture(scope="session")
def phi_plus():
    return make_phi_plus()


@pytest.fixture(scope="session")
def trine():
    return trine_bases()


@pytest.fixture(scope="session")
def uniform8():
    return uniform_triplet_model()


@pytest.fixture(scope="session")
def models_dir():
    return MODELS_DIR
