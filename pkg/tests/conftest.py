"""Shared test fixtures for the Cremona prime-order oracle."""

from pathlib import Path
from typing import Any, Dict

import pytest

from src.models.cremona.birmap import PlaneRationalMap, order5_map
from src.models.cremona.data_models import FiniteField, Rationals
from src.models.cremona.knowledge_base import (
    CremonaKnowledgeBase,
    Limits,
    load_limits,
)
from src.utils.config_loader import load_yaml_config

FIXTURES_DIR = Path(__file__).parent / "models" / "cremona" / "fixtures"
CONFIGS_DIR = Path(__file__).parent.parent / "configs"
KB_DIR = CONFIGS_DIR / "cremona_kb"


@pytest.fixture(scope="session")
def kb() -> CremonaKnowledgeBase:
    """Load the descent-case and citation catalog."""
    return CremonaKnowledgeBase(KB_DIR)


@pytest.fixture(scope="session")
def limits() -> Limits:
    """Limits from configs/limits.yaml."""
    return load_limits(CONFIGS_DIR / "limits.yaml")


@pytest.fixture
def rationals() -> Rationals:
    return Rationals()


@pytest.fixture
def f2() -> FiniteField:
    return FiniteField(p=2)


@pytest.fixture
def f17() -> FiniteField:
    return FiniteField(p=17)


@pytest.fixture
def sigma5() -> PlaneRationalMap:
    """The quadratic map (xz : x(z-y) : z(x-y)) of order 5."""
    return order5_map()


@pytest.fixture(scope="session")
def sample_maps() -> Dict[str, Any]:
    """Map texts with their expected orders."""
    return load_yaml_config(FIXTURES_DIR / "sample_maps.yaml")
