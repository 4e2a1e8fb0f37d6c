import pytest

from src.commands import run_command
from src.pipeline import (
    CHECK_DEFINITIONS,
    CheckCost,
    CheckDefinition,
    CheckGroup,
    CheckResult,
    checks_for_criteria,
    run_acceptance,
)
from src.pipeline import checks
from src.pipeline.check_groups import get_check_manifest_text
from src.pipeline.graph import after_executor, after_planner


def _replace_check(monkeypatch, name: str, run) -> None:
    original = CHECK_DEFINITIONS[name]
    monkeypatch.setitem(
        CHECK_DEFINITIONS,
        name,
        CheckDefinition(
            name=name,
            criterion=original.criterion,
            description=original.description,
            group=original.group,
            cost=CheckCost.LOW,
            run=run,
        ),
    )


def test_checks_for_criteria():
    assert [c.criterion for c in checks_for_criteria(None)] == list(range(1, 9))
    assert [c.name for c in checks_for_criteria([5, 1, 5])] == ["closed_form_bounds", "exact_identities"]
    with pytest.raises(ValueError):
        checks_for_criteria([99])


def test_manifest_lists_every_group():
    text = get_check_manifest_text()
    for group in CheckGroup:
        assert f"## {group.value.upper()}" in text


def test_routing():
    assert after_planner({"error": "x", "plan": [{}]}) == "error_handler"
    assert after_planner({"error": None, "plan": []}) == "report"
    assert after_executor({"error": None, "plan": [{}]}) == "executor"
    assert after_executor({"error": None, "plan": []}) == "report"


def test_fast_criteria_pass():
    state = run_acceptance([1, 2, 5], quick=True, seed=1)
    assert state["passed"] is True
    assert state["error"] is None
    assert [r["step"]["check"] for r in state["past_steps"]] == [
        "closed_form_bounds",
        "gamma_toolkit",
        "exact_identities",
    ]
    assert "3/3" in state["result"]


def test_unknown_criterion_goes_to_error_handler():
    state = run_acceptance([99])
    assert state["passed"] is False
    assert state["past_steps"] == []
    assert "99" in state["error"]
    assert state["result"].startswith("실행이 중단되었습니다.")


def test_failing_check_continues(monkeypatch):
    def failing(quick: bool, seed: int) -> CheckResult:
        return CheckResult(criterion=1, name="closed_form_bounds", passed=False, failures=["forced"], seconds=0.0)

    _replace_check(monkeypatch, "closed_form_bounds", failing)
    state = run_acceptance([1, 2])
    assert [r["status"] for r in state["past_steps"]] == ["failure", "success"]
    assert state["passed"] is False
    assert "forced" in state["result"]


def test_raising_check_stops_run(monkeypatch):
    def raising(quick: bool, seed: int) -> CheckResult:
        raise RuntimeError("boom")

    _replace_check(monkeypatch, "closed_form_bounds", raising)
    state = run_acceptance([1, 2])
    assert len(state["past_steps"]) == 1
    assert state["past_steps"][0]["status"] == "error"
    assert "boom" in state["error"]
    assert state["passed"] is False


def test_accept_command():
    record = run_command("accept", {"criteria": "1,5", "quick": True, "seed": 2})
    assert record.ok
    assert record.seed == 2
    assert [r["check"] for r in record.rows] == ["closed_form_bounds", "exact_identities"]


def test_lp_oracle_records_e2_deviation():
    result = checks.check_lp_oracle(True, 0)
    assert result.passed, result.failures
    assert len(result.deviations) == 1
    assert "G(2)" in result.deviations[0]
    assert result.values["E2_gap_to_G2"] > checks.E2_TARGET_GAP


def test_figure_anchors_enforce_runtime(monkeypatch):
    monkeypatch.setattr(checks, "figure_1_curve", lambda max_m: [object()] * max_m)
    assert checks.check_figure_anchors(True, 0).passed

    monkeypatch.setattr(checks, "FIGURE_SECONDS", 0.0)
    result = checks.check_figure_anchors(True, 0)
    assert not result.passed
    assert any("곡선 계산" in f for f in result.failures)


@pytest.mark.slow
@pytest.mark.parametrize("check", ["check_figure_anchors", "check_brev_dominance"])
def test_curve_checks_meet_runtime(check):
    result = getattr(checks, check)(False, 0)
    assert result.passed, result.failures


@pytest.mark.slow
def test_full_acceptance():
    state = run_acceptance(quick=False)
    assert state["passed"], state["result"]
