"""Tests for the acceptance suite."""

from typing import Tuple

import pytest

from src.models.cremona import selftest
from src.models.cremona.data_models import SelftestReport
from src.models.cremona.knowledge_base import CremonaKnowledgeBase, Limits
from src.models.cremona.selftest import CHECKS, run_selftest, summary_rows
from src.utils.exceptions import LatticeError


@pytest.fixture(scope="module")
def report(kb: CremonaKnowledgeBase, limits: Limits) -> SelftestReport:
    return run_selftest(kb, limits)


class TestRunSelftest:
    """The full suite against the bundled catalog."""

    def test_all_checks_pass(self, report: SelftestReport) -> None:
        assert report.passed, [(c.name, c.detail) for c in report.failures]

    def test_numbering(self, report: SelftestReport) -> None:
        assert [c.number for c in report.checks] == list(range(1, len(CHECKS) + 1))
        assert len(report.checks) == 12

    def test_summary_rows(self, report: SelftestReport) -> None:
        rows = summary_rows(report)
        assert rows[0]["#"] == "1"
        assert {row["result"] for row in rows} == {"PASS"}


class TestFailureHandling:
    """Library errors inside a check mark it failed."""

    def test_error_becomes_failure(self, monkeypatch: pytest.MonkeyPatch) -> None:
        def broken(ctx: object) -> Tuple[bool, str]:
            raise LatticeError("boom")

        def fine(ctx: object) -> Tuple[bool, str]:
            return True, "ok"

        monkeypatch.setattr(selftest, "CHECKS", [("broken", broken), ("fine", fine)])
        result = run_selftest()
        assert not result.passed
        (failure,) = result.failures
        assert failure.number == 1
        assert failure.detail == "LatticeError: boom"
        assert summary_rows(result)[1]["result"] == "PASS"
