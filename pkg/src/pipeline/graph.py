"""Acceptance Graph Builder.

제어 흐름은 그래프(State + Edge)로만 결정한다.
"""

from langgraph.graph import END, START, StateGraph

from src.config import settings
from src.pipeline.nodes import error_handler_node, executor_node, planner_node, report_node
from src.pipeline.state import AcceptState


def after_planner(state: AcceptState) -> str:
    """Planner 후 분기 결정.

    - error 있음 → error_handler
    - plan 있음 → executor
    - plan 없음 → report
    """
    if state.get("error"):
        return "error_handler"
    if state.get("plan"):
        return "executor"
    return "report"


def after_executor(state: AcceptState) -> str:
    """Executor 후 분기 결정.

    - 예외 발생 → error_handler
    - plan에 더 있음 → executor
    - plan 완료 → report
    """
    if state.get("error"):
        return "error_handler"
    if state.get("plan"):
        return "executor"
    return "report"


def build_accept_graph():
    """Acceptance 그래프 생성.

    그래프 구조:
    ```
    START → planner → [executor ↺] → report → END
                ↘ error_handler ↙ → END
    ```

    Returns:
        컴파일된 StateGraph
    """
    workflow = StateGraph(AcceptState)

    # 노드 추가
    workflow.add_node("planner", planner_node)
    workflow.add_node("executor", executor_node)
    workflow.add_node("report", report_node)
    workflow.add_node("error_handler", error_handler_node)

    # 엣지 추가
    workflow.add_edge(START, "planner")

    workflow.add_conditional_edges(
        "planner",
        after_planner,
        {
            "executor": "executor",
            "report": "report",
            "error_handler": "error_handler",
        },
    )

    workflow.add_conditional_edges(
        "executor",
        after_executor,
        {
            "executor": "executor",
            "report": "report",
            "error_handler": "error_handler",
        },
    )

    # 종료 엣지
    workflow.add_edge("report", END)
    workflow.add_edge("error_handler", END)

    return workflow.compile()


# 싱글톤 그래프 인스턴스
_graph = None


def get_accept_graph():
    """Acceptance 그래프 싱글톤 반환."""
    global _graph
    if _graph is None:
        _graph = build_accept_graph()
    return _graph


def initial_state(criteria: list[int] | None = None, quick: bool = False, seed: int | None = None) -> AcceptState:
    """실행 시작 상태."""
    return {
        "criteria": criteria,
        "quick": quick,
        "seed": settings.default_seed if seed is None else seed,
        "plan": [],
        "past_steps": [],
        "error": None,
        "passed": False,
        "result": None,
    }


def run_acceptance(criteria: list[int] | None = None, quick: bool = False, seed: int | None = None) -> AcceptState:
    """Acceptance 그래프를 끝까지 실행하고 최종 상태를 반환."""
    return get_accept_graph().invoke(initial_state(criteria, quick, seed))
