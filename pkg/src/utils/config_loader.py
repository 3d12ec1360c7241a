"""Configuration file loading utilities."""

import logging
from pathlib import Path
from typing import Any, Dict, Type, TypeVar

import yaml
from pydantic import BaseModel, ValidationError

from .exceptions import ConfigValidationError

logger = logging.getLogger(__name__)

ModelT = TypeVar("ModelT", bound=BaseModel)


def load_yaml_config(config_path: Path) -> Dict[str, Any]:
    """Load and parse a YAML mapping.

    Args:
        config_path: Path to YAML file.

    Returns:
        Parsed top-level mapping.

    Raises:
        ConfigValidationError: If the file is missing, empty, malformed, or
            its top level is not a mapping.
    """
    if not config_path.exists():
        raise ConfigValidationError(f"Config file not found: {config_path}")

    try:
        with open(config_path, "r", encoding="utf-8") as f:
            config = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise ConfigValidationError(f"Invalid YAML in {config_path}: {e}") from e

    if config is None:
        raise ConfigValidationError(f"Empty config file: {config_path}")
    if not isinstance(config, dict):
        raise ConfigValidationError(
            f"Top level of {config_path} must be a mapping, "
            f"got {type(config).__name__}"
        )

    logger.debug("Loaded config from %s (%d keys)", config_path, len(config))
    return config


def load_yaml_model(config_path: Path, model: Type[ModelT]) -> ModelT:
    """Load a YAML mapping and validate it into a pydantic model.

    Raises:
        ConfigValidationError: On any load or validation failure.
    """
    raw = load_yaml_config(config_path)
    try:
        return model.model_validate(raw)
    except ValidationError as e:
        raise ConfigValidationError(
            f"{config_path.name} failed {model.__name__} validation: {e}"
        ) from e
