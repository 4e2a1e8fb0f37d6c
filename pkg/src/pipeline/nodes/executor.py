"""Executor Node.

- plan에 정의된 step을 그대로 실행
- 결과 기록
- 판단 ❌
"""

import logging

from src.pipeline.check_groups import get_check
from src.pipeline.state import AcceptState

logger = logging.getLogger(__name__)


def executor_node(state: AcceptState) -> dict:
    """plan의 첫 번째 step을 실행.

    허용치 실패는 status "failure"로 기록하고 계속 진행한다.
    예외는 status "error"와 error 메시지로 기록해 fail-closed 처리한다.

    Args:
        state: 현재 상태

    Returns:
        past_steps에 실행 결과가 추가된 상태 업데이트
    """
    plan = list(state["plan"])  # 복사본 생성
    past_steps = list(state["past_steps"])

    if not plan:
        return {"plan": [], "past_steps": past_steps}

    # 첫 번째 step 가져오기 (FIFO)
    step = plan.pop(0)
    check = get_check(step["check"])

    update: dict = {}
    try:
        if check is None:
            raise ValueError(f"알 수 없는 점검: {step['check']}")
        result = check.run(step["quick"], step["seed"])
        output = result.model_dump()
        status = "success" if result.passed else "failure"
        logger.info("[%d] %s: %s (%.1fs)", result.criterion, result.name, status, result.seconds)
    except Exception as e:
        output = {"exception": type(e).__name__, "message": str(e)}
        status = "error"
        update["error"] = f"{step['check']}: {type(e).__name__}: {e}"
        logger.exception("check %s raised", step["check"])

    # 결과 기록
    past_steps.append({
        "step": step,
        "status": status,
        "output": output,
    })

    return {
        "plan": plan,
        "past_steps": past_steps,
        **update,
    }
