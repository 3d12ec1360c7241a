"""Tests for the command-line interface."""

import json
from pathlib import Path
from typing import Any, Dict, List, Tuple

import pytest

import src.cli as cli
from src.models.cremona.data_models import SelftestCheck, SelftestReport

MAP_TEXT = "x*z, x*(z-y), z*(x-y)"


def run(capsys: pytest.CaptureFixture[str], argv: List[str]) -> Tuple[int, str, str]:
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(
    capsys: pytest.CaptureFixture[str], argv: List[str]
) -> Tuple[int, Dict[str, Any]]:
    code, out, _ = run(capsys, ["--json", *argv])
    return code, json.loads(out)


class TestOracleCommand:
    """The decision procedure on the command line."""

    def test_json_report(self, capsys: pytest.CaptureFixture[str]) -> None:
        code, payload = run_json(capsys, ["oracle", "--field", "Q", "--ell", "7"])
        assert code == 0
        assert payload["command"] == "oracle"
        assert payload["inputs"] == {"field": "Q", "ell": 7}
        assert payload["result"]["exists"] is True
        assert payload["result"]["mechanism"] == "DelPezzo6"
        assert "dp6-minimal-action" in payload["citations"]

    def test_json_is_canonical(self, capsys: pytest.CaptureFixture[str]) -> None:
        code, out, _ = run(capsys, ["--json", "oracle", "--field", "F2", "--ell", "7"])
        assert code == 0
        line = out.strip()
        assert json.dumps(json.loads(line), sort_keys=True, ensure_ascii=False) == line

    def test_flags_after_subcommand(self, capsys: pytest.CaptureFixture[str]) -> None:
        code, out, _ = run(capsys, ["oracle", "--field", "Q", "--ell", "11", "--json"])
        assert code == 0
        assert json.loads(out)["result"]["exists"] is False

    def test_text_output(self, capsys: pytest.CaptureFixture[str]) -> None:
        code, out, _ = run(capsys, ["oracle", "--field", "F17", "--ell", "13"])
        assert code == 0
        assert "exists: true" in out
        assert "mechanism: DelPezzo6" in out
        assert "[dp6-minimal-action] " in out


class TestExitCodes:
    """0 on success, 1 for domain errors, 2 for caps and self-checks."""

    @pytest.mark.parametrize(
        "argv",
        [
            ["oracle", "--field", "F7", "--ell", "7"],
            ["oracle", "--field", "F12", "--ell", "7"],
            ["invariants", "--field", "Q", "--ell", "15"],
            ["birmap", "order", "--map", MAP_TEXT, "--modulus", "4"],
            ["birmap", "order", "--map", "x, y"],
            ["weyl", "automorphs", "--gram", "1,2"],
        ],
    )
    def test_domain_errors(
        self, capsys: pytest.CaptureFixture[str], argv: List[str]
    ) -> None:
        code, _, err = run(capsys, argv)
        assert code == 1
        assert err.startswith("error: ")

    def test_json_error(self, capsys: pytest.CaptureFixture[str]) -> None:
        code, payload = run_json(capsys, ["oracle", "--field", "R", "--ell", "7"])
        assert code == 1
        assert payload["command"] == "oracle"
        assert "error" in payload

    def test_cap_exceeded(
        self, capsys: pytest.CaptureFixture[str], tmp_path: Path
    ) -> None:
        limits = tmp_path / "limits.yaml"
        limits.write_text("max_power_digits: 1\n")
        argv = ["--limits", str(limits), "invariants", "--field", "F17", "--ell", "13"]
        code, _, err = run(capsys, argv)
        assert code == 2
        assert "error:" in err

    def test_invalid_limits_file(
        self, capsys: pytest.CaptureFixture[str], tmp_path: Path
    ) -> None:
        limits = tmp_path / "limits.yaml"
        limits.write_text("orbit_cap: -1\n")
        code, _, _ = run(capsys, ["--limits", str(limits), "weyl", "classes"])
        assert code == 1

    @pytest.mark.parametrize(
        "argv",
        [
            ["oracle", "--field", "Q", "--ell", "abc"],
            ["oracle", "--field", "Q"],
            [],
            ["no-such-command"],
        ],
    )
    def test_usage_errors(
        self, capsys: pytest.CaptureFixture[str], argv: List[str]
    ) -> None:
        code, _, err = run(capsys, argv)
        assert code == 1
        assert "usage:" in err

    def test_help_exits_zero(self, capsys: pytest.CaptureFixture[str]) -> None:
        code, out, _ = run(capsys, ["--help"])
        assert code == 0
        assert "usage:" in out

    def test_map_degree_cap(self, capsys: pytest.CaptureFixture[str]) -> None:
        code, _, err = run(capsys, ["birmap", "order", "--map", "x*y, y*z, x^2 + z^2"])
        assert code == 2
        assert "degree" in err

    def test_exponent_tower_is_domain_error(
        self, capsys: pytest.CaptureFixture[str]
    ) -> None:
        code, _, err = run(capsys, ["birmap", "order", "--map", "x*9^9^9, y, z"])
        assert code == 1
        assert err.startswith("error: ")


class TestSubcommands:
    """One call per subcommand family."""

    def test_invariants(self, capsys: pytest.CaptureFixture[str]) -> None:
        argv = ["invariants", "--field", "F17", "--ell", "13"]
        code, payload = run_json(capsys, argv)
        assert code == 0
        assert payload["result"]["t"] == 6
        assert payload["result"]["m"] == 1
        assert payload["result"]["cyclotomic_character"] == 4

    @pytest.mark.parametrize(
        "argv, bound, citations",
        [
            (["minkowski", "--n", "6", "--ell", "7"], 1, ["minkowski-bound"]),
            (["pgl", "--n", "2", "--field", "Q", "--ell", "7"], 0, ["pgl-exclusion"]),
            (
                ["torus", "--dim", "2", "--field", "Q", "--ell", "7"],
                1,
                ["serre-torus-bound"],
            ),
        ],
    )
    def test_bounds(
        self,
        capsys: pytest.CaptureFixture[str],
        argv: List[str],
        bound: int,
        citations: List[str],
    ) -> None:
        code, payload = run_json(capsys, ["bounds", *argv])
        assert code == 0
        assert payload["result"]["bound"] == bound
        assert payload["citations"] == citations

    def test_dp6_cases(self, capsys: pytest.CaptureFixture[str]) -> None:
        code, payload = run_json(capsys, ["dp6", "cases"])
        assert code == 0
        assert len(payload["result"]) == 10
        assert payload["result"][5]["label"] == "(vi)"
        assert payload["result"][5]["picard_rank"] == 1

    def test_dp6_cases_text_table(self, capsys: pytest.CaptureFixture[str]) -> None:
        code, out, _ = run(capsys, ["dp6", "cases", "--fan", "quadrangle"])
        assert code == 0
        lines = out.splitlines()
        assert lines[0].split() == [
            "label",
            "group",
            "order",
            "cyclic",
            "picard_rank",
            "anisotropic",
        ]
        assert len(lines) == 9

    def test_dp6_minimal_quadrangle(self, capsys: pytest.CaptureFixture[str]) -> None:
        argv = ["dp6", "minimal", "--fan", "quadrangle", "--field", "F5", "--ell", "13"]
        code, payload = run_json(capsys, argv)
        assert code == 0
        assert payload["result"]["required_case"] == "cyclic-4"
        assert payload["citations"] == ["dp8-quadrangle"]

    def test_weyl_classes(self, capsys: pytest.CaptureFixture[str]) -> None:
        code, payload = run_json(capsys, ["weyl", "classes", "--r", "6"])
        assert code == 0
        assert payload["result"] == {"r": 6, "count": 27}

    def test_weyl_classes_listed(self, capsys: pytest.CaptureFixture[str]) -> None:
        code, payload = run_json(capsys, ["weyl", "classes", "--r", "3", "--list"])
        assert code == 0
        assert len(payload["result"]["classes"]) == 6

    def test_weyl_orbit_with_start(self, capsys: pytest.CaptureFixture[str]) -> None:
        argv = ["weyl", "orbit", "--r", "6", "--start", "0,0,0,0,0,0,1"]
        code, payload = run_json(capsys, argv)
        assert code == 0
        assert payload["result"]["orbit_size"] == 27
        assert payload["result"]["weyl_group_order"] == 51840

    def test_weyl_automorphs(self, capsys: pytest.CaptureFixture[str]) -> None:
        code, payload = run_json(capsys, ["weyl", "automorphs", "--gram", "1,0,1"])
        assert code == 0
        assert len(payload["result"]["full"]) == 8

    def test_weyl_invariants(self, capsys: pytest.CaptureFixture[str]) -> None:
        code, payload = run_json(capsys, ["weyl", "invariants", "--r", "8"])
        assert code == 0
        assert payload["result"]["rank"] == 2
        assert payload["result"]["explicit_basis"]["sign_discrepancy"] is True

    def test_birmap_order(self, capsys: pytest.CaptureFixture[str]) -> None:
        code, payload = run_json(capsys, ["birmap", "order", "--map", MAP_TEXT])
        assert code == 0
        assert payload["result"]["order"] == 5
        assert payload["result"]["degree"] == 2
        assert payload["result"]["max_k"] == 12
        assert payload["citations"] == ["dp5-quadratic-map"]

    def test_birmap_order_not_found(self, capsys: pytest.CaptureFixture[str]) -> None:
        argv = ["birmap", "order", "--map", MAP_TEXT, "--max-k", "3"]
        code, payload = run_json(capsys, argv)
        assert code == 0
        assert payload["result"]["order"] is None
        assert payload["citations"] == []

    def test_birmap_order_not_found_text(
        self, capsys: pytest.CaptureFixture[str]
    ) -> None:
        argv = ["birmap", "order", "--map", MAP_TEXT, "--max-k", "3"]
        code, out, _ = run(capsys, argv)
        assert code == 0
        assert "order: exceeds max_k (3)" in out

    def test_conjugacy7(self, capsys: pytest.CaptureFixture[str]) -> None:
        code, payload = run_json(capsys, ["conjugacy7", "--field", "Q"])
        assert code == 0
        assert payload["result"]["transitive"] is True
        assert payload["citations"] == ["order7-conjugacy", "descent-equivariance"]


class TestSelftestCommand:
    """Exit status follows the report."""

    @staticmethod
    def _fake(passed: bool) -> SelftestReport:
        return SelftestReport(
            checks=[
                SelftestCheck(number=1, name="first", passed=True, detail="ok"),
                SelftestCheck(number=2, name="second", passed=passed, detail="x"),
            ]
        )

    def test_passing(
        self, capsys: pytest.CaptureFixture[str], monkeypatch: pytest.MonkeyPatch
    ) -> None:
        monkeypatch.setattr(cli, "run_selftest", lambda kb, limits: self._fake(True))
        code, out, _ = run(capsys, ["selftest"])
        assert code == 0
        assert "FAIL" not in out

    def test_failing_prints_table_then_exits_2(
        self, capsys: pytest.CaptureFixture[str], monkeypatch: pytest.MonkeyPatch
    ) -> None:
        monkeypatch.setattr(cli, "run_selftest", lambda kb, limits: self._fake(False))
        code, out, err = run(capsys, ["selftest"])
        assert code == 2
        assert "FAIL" in out
        assert "checks failed: 2" in err
