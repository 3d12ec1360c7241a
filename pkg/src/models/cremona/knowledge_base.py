"""Descent-case catalog, citation statements and computational limits.

Loads structured knowledge from YAML configs: the labelled Galois descent
cases of the hexagon and quadrangle fans, the citation tags carried by
reports, and the caps that bound every search in the package.
"""

import logging
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from src.utils.config_loader import load_yaml_config, load_yaml_model
from src.utils.exceptions import ConfigValidationError, KnowledgeBaseError

from .integer_linalg import IntMatrix, as_int_matrix, determinant

logger = logging.getLogger(__name__)

# Default config paths (relative to project root)
_PROJECT_ROOT = Path(__file__).resolve().parents[3]
KB_DIR = _PROJECT_ROOT / "configs" / "cremona_kb"
LIMITS_PATH = _PROJECT_ROOT / "configs" / "limits.yaml"

FAN_NAMES = ("hexagon", "quadrangle")


class Limits(BaseModel):
    """Caps on closures, orbits, power searches and coefficient growth."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    group_closure_cap: int = Field(100_000, ge=1)
    orbit_cap: int = Field(1_000_000, ge=1)
    power_iteration_cap: int = Field(1_000, ge=1)
    max_power_digits: int = Field(200, ge=1)
    coefficient_digit_cap: int = Field(10_000, ge=1)
    projective_order_max_k: int = Field(12, ge=1)
    max_map_degree: int = Field(32, ge=1)


@lru_cache(maxsize=None)
def load_limits(path: Path = LIMITS_PATH) -> Limits:
    """Load and validate a limits file (cached per path).

    Raises:
        ConfigValidationError: If the file is missing or invalid.
    """
    limits = load_yaml_model(path, Limits)
    logger.debug("Loaded limits from %s: %s", path, limits)
    return limits


def default_limits() -> Limits:
    """Limits from configs/limits.yaml."""
    return load_limits(LIMITS_PATH)


class CatalogCase(BaseModel):
    """One labelled descent case as written in descent_cases.yaml."""

    model_config = ConfigDict(frozen=True)

    label: str = Field(..., min_length=1)
    group: str = Field(..., min_length=1)
    generators: Tuple[IntMatrix, ...] = Field(..., min_length=1)

    @field_validator("generators")
    @classmethod
    def unimodular_2x2(cls, v: Tuple[IntMatrix, ...]) -> Tuple[IntMatrix, ...]:
        frozen = tuple(as_int_matrix(g) for g in v)
        for g in frozen:
            if len(g) != 2:
                raise ValueError(f"generator {g} is not 2x2")
            if determinant(g) not in (1, -1):
                raise ValueError(f"generator {g} is not in GL2(Z)")
        return frozen


class CremonaKnowledgeBase:
    """Load, validate, and query the descent-case and citation catalogs.

    Args:
        config_dir: Path to configs/cremona_kb/ directory.

    Raises:
        KnowledgeBaseError: If configs are missing or unreadable.
        ConfigValidationError: If an entry fails validation.
    """

    def __init__(self, config_dir: Path = KB_DIR) -> None:
        self.config_dir = config_dir
        self._cases: Dict[str, List[CatalogCase]] = {}
        self._citations: Dict[str, str] = {}
        self._load()

    def _load(self) -> None:
        try:
            raw_cases = load_yaml_config(self.config_dir / "descent_cases.yaml")
            raw_citations = load_yaml_config(self.config_dir / "citations.yaml")
        except Exception as e:
            raise KnowledgeBaseError(f"Failed to load knowledge base: {e}") from e

        for fan_name in FAN_NAMES:
            if fan_name not in raw_cases:
                raise ConfigValidationError(
                    f"Missing descent cases for fan '{fan_name}'"
                )
            self._cases[fan_name] = [
                self._build_case(fan_name, entry) for entry in raw_cases[fan_name]
            ]
            labels = [case.label for case in self._cases[fan_name]]
            if len(set(labels)) != len(labels):
                raise ConfigValidationError(f"Duplicate case labels for '{fan_name}'")

        for tag, statement in raw_citations.items():
            if not isinstance(statement, str) or not statement.strip():
                raise ConfigValidationError(f"Citation '{tag}' has no statement")
            self._citations[str(tag)] = " ".join(statement.split())

        logger.info(
            "Loaded %d descent cases and %d citations from %s",
            sum(len(v) for v in self._cases.values()),
            len(self._citations),
            self.config_dir,
        )

    @staticmethod
    def _build_case(fan_name: str, entry: dict) -> CatalogCase:
        try:
            return CatalogCase.model_validate(entry)
        except ValidationError as e:
            label = entry.get("label", "?") if isinstance(entry, dict) else "?"
            raise ConfigValidationError(
                f"Descent case {fan_name}/{label} validation failed: {e}"
            ) from e

    # -- Query methods --

    def get_cases(self, fan_name: str) -> List[CatalogCase]:
        """Labelled cases of a fan, in catalog order.

        Raises:
            KnowledgeBaseError: For an unknown fan name.
        """
        if fan_name not in self._cases:
            raise KnowledgeBaseError(f"Unknown fan '{fan_name}'")
        return list(self._cases[fan_name])

    def get_case(self, fan_name: str, label: str) -> Optional[CatalogCase]:
        for case in self.get_cases(fan_name):
            if case.label == label:
                return case
        return None

    def cite(self, tag: str) -> str:
        """Statement behind a citation tag.

        Raises:
            KnowledgeBaseError: For an unknown tag.
        """
        try:
            return self._citations[tag]
        except KeyError:
            raise KnowledgeBaseError(f"Unknown citation tag '{tag}'") from None

    def has_citation(self, tag: str) -> bool:
        return tag in self._citations

    @property
    def citation_tags(self) -> List[str]:
        return sorted(self._citations)

    @property
    def case_count(self) -> int:
        """Number of labelled cases across both fans."""
        return sum(len(v) for v in self._cases.values())


@lru_cache(maxsize=1)
def default_knowledge_base() -> CremonaKnowledgeBase:
    """Knowledge base from configs/cremona_kb/, loaded once."""
    return CremonaKnowledgeBase(KB_DIR)
