"""Tests for YAML config loader utility."""

from pathlib import Path

import pytest

from src.models.cremona.knowledge_base import Limits
from src.utils.config_loader import load_yaml_config, load_yaml_model
from src.utils.exceptions import ConfigValidationError

CONFIGS_DIR = Path(__file__).parent.parent.parent / "configs"


def test_load_valid_yaml() -> None:
    """Loading a valid YAML file returns a dict."""
    result = load_yaml_config(CONFIGS_DIR / "limits.yaml")
    assert isinstance(result, dict)
    assert "orbit_cap" in result
    assert "group_closure_cap" in result


def test_load_nonexistent_file() -> None:
    """Loading a nonexistent file raises ConfigValidationError."""
    with pytest.raises(ConfigValidationError, match="not found"):
        load_yaml_config(Path("/nonexistent/path.yaml"))


def test_load_descent_cases_yaml() -> None:
    """descent_cases.yaml has both fans."""
    result = load_yaml_config(CONFIGS_DIR / "cremona_kb" / "descent_cases.yaml")
    assert set(result) == {"hexagon", "quadrangle"}
    assert len(result["hexagon"]) == 7


def test_empty_file(tmp_path: Path) -> None:
    """An empty file is rejected."""
    path = tmp_path / "empty.yaml"
    path.write_text("")
    with pytest.raises(ConfigValidationError, match="Empty"):
        load_yaml_config(path)


def test_invalid_yaml(tmp_path: Path) -> None:
    """Malformed YAML is rejected."""
    path = tmp_path / "bad.yaml"
    path.write_text("a: [1, 2\n")
    with pytest.raises(ConfigValidationError, match="Invalid YAML"):
        load_yaml_config(path)


def test_top_level_list(tmp_path: Path) -> None:
    """A top-level sequence is rejected."""
    path = tmp_path / "list.yaml"
    path.write_text("- 1\n- 2\n")
    with pytest.raises(ConfigValidationError, match="must be a mapping"):
        load_yaml_config(path)


def test_load_model() -> None:
    """limits.yaml validates into the Limits model."""
    limits = load_yaml_model(CONFIGS_DIR / "limits.yaml", Limits)
    assert limits.power_iteration_cap == 1000
    assert limits.max_power_digits == 200
