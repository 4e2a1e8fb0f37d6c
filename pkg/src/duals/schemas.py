"""Dual certificate report schemas."""

from enum import Enum
from fractions import Fraction

from pydantic import BaseModel, ConfigDict, Field, computed_field, field_serializer

BOUNDARY_TOLERANCE = 1e-9
ANALYTIC_TOLERANCE = 1e-6


class DualFamily(str, Enum):
    """Dual solution family."""

    UNIFORM = "uniform"
    UNIFORM_TRIVIAL = "uniform-trivial"
    EXPONENTIAL = "exp"


class ObjectiveMethod(str, Enum):
    """Dual objective 적분 방법."""

    MIDPOINT = "midpoint"
    QUASI_RANDOM = "quasi-random"


class FeasibilityReport(BaseModel):
    """Dual 제약 점검 및 objective 적분 결과.

    residual은 점검한 점들에 대한 최댓값이다.
    """

    family: DualFamily = Field(description="dual family")
    m: int = Field(ge=1, description="아이템 수")
    lambdas: list[float] | None = Field(default=None, description="exponential rate")
    grid_points_per_axis: int = Field(description="축당 셀 수")
    w_max: float | None = Field(default=None, description="exponential 절단 w")
    cells_checked: int = Field(ge=0, description="미분 제약을 점검한 셀 수")
    cells_skipped_at_kinks: int = Field(ge=0, description="kink를 가로질러 건너뛴 셀 수")
    max_boundary_residual: float = Field(ge=0, description="경계 조건 최대 위반")
    max_derivative_residual: float = Field(ge=0, description="편미분 합 상한 최대 위반")
    max_analytic_mismatch: float = Field(ge=0, description="유한차분과 해석적 편미분의 최대 차이")
    derivative_violations: int = Field(ge=0, description="허용치를 넘은 점 수")
    derivative_tolerance: float = Field(gt=0, description="편미분 합 허용치")
    objective_numeric: float = Field(description="수치 적분 objective")
    objective_closed_form: float = Field(gt=0, description="폐형식 objective")
    objective_method: ObjectiveMethod = Field(description="적분 방법")
    objective_tolerance: float = Field(gt=0, description="상대 허용치")
    tail_bound: float | None = Field(default=None, description="절단 영역 objective 상한")

    @computed_field
    @property
    def relative_gap(self) -> float:
        return abs(self.objective_numeric - self.objective_closed_form) / self.objective_closed_form

    @computed_field
    @property
    def ok(self) -> bool:
        return (
            self.max_boundary_residual <= BOUNDARY_TOLERANCE
            and self.derivative_violations == 0
            and self.max_analytic_mismatch <= ANALYTIC_TOLERANCE
            and self.relative_gap <= self.objective_tolerance
        )


class BranchGap(BaseModel):
    """w = γ*_m 양쪽에서 두 분기식 값의 차이."""

    m: int
    gamma_star: float
    delta: float
    below: float = Field(description="γ* - δ 에서 활성 분기식 최대 절댓값")
    above: float = Field(description="γ* + δ 에서 활성 분기식 최대 절댓값")
    tolerance: float

    @computed_field
    @property
    def gap(self) -> float:
        return max(self.below, self.above)

    @computed_field
    @property
    def ok(self) -> bool:
        return self.gap <= self.tolerance


class IdentityCheck(BaseModel):
    """정확 산술 항등식 결과 (양변 유리수)."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    m: int
    lhs: Fraction
    rhs: Fraction

    @field_serializer("lhs", "rhs")
    def _fraction_to_str(self, value: Fraction) -> str:
        return str(value)

    @computed_field
    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


class SimplexMoments(BaseModel):
    """단위 simplex 부피와 1차 모멘트 (폐형식 + quasi-random 추정)."""

    m: int = Field(ge=2)
    volume: float = Field(description="1/(m-1)!")
    first_moment: float = Field(description="1/m!")
    log_volume: float
    log_first_moment: float
    volume_estimate: float | None = Field(default=None, description="hit-count 추정 (m ≤ 6)")
    moment_estimate: float | None = Field(default=None, description="∫ t_1 추정 (m ≤ 6)")
    n_points: int | None = None
