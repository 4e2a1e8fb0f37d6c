"""Acceptance pipeline state definition.

- plan은 구조화된 step 목록
- past_steps에는 판단 없이 실행 결과만 기록
- 상태는 사실(fact)만 담는다
"""

from typing import Any, TypedDict


class AcceptState(TypedDict):
    """Plan-then-execute acceptance 점검 상태.

    Attributes:
        criteria: 요청된 criterion 번호 (None이면 전체)
        quick: Monte Carlo 표본 수를 줄인 smoke 실행 여부
        seed: 확률적 점검의 seed
        plan: 실행 대기 중인 step 목록 [{step_id, check, quick, seed}]
        past_steps: 실행 완료된 step과 결과 [{step, status, output}]
        error: 에러 메시지 (있으면 fail-closed)
        passed: 모든 실행된 점검 통과 여부
        result: 사람이 읽는 요약
    """

    # 입력
    criteria: list[int] | None
    quick: bool
    seed: int

    # 계획
    plan: list[dict[str, Any]]

    # 실행 로그
    past_steps: list[dict[str, Any]]

    # 제어
    error: str | None

    # 출력
    passed: bool
    result: str | None
