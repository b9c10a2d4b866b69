from pathlib import Path

import pytest

from core.rng import chain_rng
from graphs.lattices import make_grid

FIXTURES_DIR = Path(__file__).resolve().parent / "fixtures"


@pytest.fixture
def fixtures_dir():
    return FIXTURES_DIR


@pytest.fixture
def rng():
    return chain_rng(20240601)


@pytest.fixture
def grid_2x2():
    return make_grid(2, 2)


@pytest.fixture
def grid_4x4():
    return make_grid(4, 4)
