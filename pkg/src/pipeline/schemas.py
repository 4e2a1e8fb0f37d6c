"""Pydantic schemas for the acceptance pipeline."""

from typing import Any

from pydantic import BaseModel, Field


class PlanStep(BaseModel):
    """실행 계획의 단일 스텝.

    Attributes:
        step_id: 순차 식별자
        check: 실행할 점검 이름 (CHECK_DEFINITIONS 키)
        quick: 축소 실행 여부
        seed: 확률적 점검 seed
    """

    step_id: int = Field(ge=1, description="스텝 고유 식별자")
    check: str = Field(description="실행할 점검 이름")
    quick: bool = Field(default=False, description="축소 실행")
    seed: int = Field(ge=0, description="seed")


class Plan(BaseModel):
    """실행 계획."""

    steps: list[PlanStep] = Field(description="실행할 스텝 목록")


class CheckResult(BaseModel):
    """점검 하나의 결과.

    Attributes:
        criterion: acceptance criterion 번호
        name: 점검 이름
        passed: 허용치 통과 여부
        failures: 실패한 항목 설명
        deviations: 기준을 바꿔 점검한 항목과 그 이유
        values: 점검에 쓴 주요 수치
        seconds: 실행 시간
    """

    criterion: int
    name: str
    passed: bool
    failures: list[str] = Field(default_factory=list)
    deviations: list[str] = Field(default_factory=list)
    values: dict[str, Any] = Field(default_factory=dict)
    seconds: float = 0.0
