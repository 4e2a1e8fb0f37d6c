"""Planner Node.

- 요청된 criterion을 실행 가능한 plan으로 변환
- 점검 실행 ❌
- plan 검증 실패 시 실행 금지
"""

import logging

from pydantic import ValidationError

from src.pipeline.check_groups import checks_for_criteria
from src.pipeline.schemas import Plan, PlanStep
from src.pipeline.state import AcceptState

logger = logging.getLogger(__name__)


def planner_node(state: AcceptState) -> dict:
    """criterion 목록에서 점검 plan 생성.

    Args:
        state: 현재 상태

    Returns:
        plan 또는 error가 설정된 상태 업데이트
    """
    try:
        checks = checks_for_criteria(state.get("criteria"))
        plan = Plan(
            steps=[
                PlanStep(step_id=i, check=check.name, quick=state["quick"], seed=state["seed"])
                for i, check in enumerate(checks, 1)
            ]
        )
    except (ValueError, ValidationError) as e:
        return {"plan": [], "error": f"plan 생성 실패: {e}"}

    logger.info("plan: %s", [s.check for s in plan.steps])
    return {"plan": [s.model_dump() for s in plan.steps], "error": None}
