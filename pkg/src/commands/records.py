"""Command output records."""

from enum import Enum
from typing import Any

from pydantic import BaseModel, Field

from src.config import settings


class Provenance(str, Enum):
    """수치의 출처."""

    CLOSED_FORM = "closed-form"
    QUADRATURE = "quadrature"
    MONTE_CARLO = "monte-carlo"
    LP = "lp"
    NUMERIC = "numeric"


class OutputFormat(str, Enum):
    """출력 형식."""

    TABLE = "table"
    JSON = "json"
    CSV = "csv"


class OutputRecord(BaseModel):
    """명령 하나의 결과.

    Attributes:
        command: 실행한 명령 이름
        params: 검증된 입력 파라미터
        results: 이름 붙은 스칼라 결과
        rows: 곡선/표 데이터 (fig, lp 등)
        provenance: 결과 출처 태그
        version: 도구 버전
        seed: 확률적 결과의 seed
        ok: 모든 점검이 허용치 안인지
        violations: 허용치를 넘은 항목 설명
    """

    command: str = Field(description="명령 이름")
    params: dict[str, Any] = Field(default_factory=dict, description="입력 파라미터")
    results: dict[str, Any] = Field(default_factory=dict, description="스칼라 결과")
    rows: list[dict[str, Any]] | None = Field(default=None, description="행 데이터")
    provenance: list[Provenance] = Field(default_factory=list, description="출처")
    version: str = Field(default=settings.app_version, description="도구 버전")
    seed: int | None = Field(default=None, description="seed (확률적 결과)")
    ok: bool = Field(default=True, description="모든 점검 통과 여부")
    violations: list[str] = Field(default_factory=list, description="위반 목록")

    def fail(self, message: str) -> None:
        """위반 추가."""
        self.ok = False
        self.violations.append(message)
