"""Acceptance 점검 그룹 및 비용 정의.

- 각 점검은 acceptance criterion 하나를 담당
- 비용 등급은 --quick 축소 대상과 실행 순서에 쓰인다
"""

from dataclasses import dataclass
from enum import Enum

from src.pipeline.checks import (
    CheckFn,
    check_brev_dominance,
    check_closed_form_bounds,
    check_dual_certificates,
    check_exact_identities,
    check_figure_anchors,
    check_gamma_toolkit,
    check_lp_oracle,
    check_mechanism_simulation,
)


class CheckGroup(str, Enum):
    """점검 그룹 분류."""

    CLOSED_FORM = "closed-form"  # 폐형식 값, 정확 항등식
    NUMERIC = "numeric"  # 근 찾기, quadrature, 격자 점검
    STOCHASTIC = "stochastic"  # Monte Carlo
    ORACLE = "oracle"  # LP


class CheckCost(str, Enum):
    """점검 실행 비용 수준."""

    LOW = "low"  # 1초 미만
    MEDIUM = "medium"  # 수 초
    HIGH = "high"  # 수십 초


@dataclass
class CheckDefinition:
    """점검 정의."""

    name: str
    criterion: int
    description: str
    group: CheckGroup
    cost: CheckCost
    run: CheckFn


# 점검 정의 (criterion 번호 순)
CHECK_DEFINITIONS: dict[str, CheckDefinition] = {
    "closed_form_bounds": CheckDefinition(
        name="closed_form_bounds",
        criterion=1,
        description="uniform 상한 폐형식과 기준값",
        group=CheckGroup.CLOSED_FORM,
        cost=CheckCost.LOW,
        run=check_closed_form_bounds,
    ),
    "gamma_toolkit": CheckDefinition(
        name="gamma_toolkit",
        criterion=2,
        description="γ*_m 근과 G(m) quadrature 대조",
        group=CheckGroup.NUMERIC,
        cost=CheckCost.LOW,
        run=check_gamma_toolkit,
    ),
    "figure_anchors": CheckDefinition(
        name="figure_anchors",
        criterion=3,
        description="ratio 곡선 기준점과 m ≤ 100 곡선",
        group=CheckGroup.NUMERIC,
        cost=CheckCost.MEDIUM,
        run=check_figure_anchors,
    ),
    "dual_certificates": CheckDefinition(
        name="dual_certificates",
        criterion=4,
        description="uniform/exponential dual 제약과 objective",
        group=CheckGroup.NUMERIC,
        cost=CheckCost.HIGH,
        run=check_dual_certificates,
    ),
    "exact_identities": CheckDefinition(
        name="exact_identities",
        criterion=5,
        description="정확 산술 항등식, G(m)/m! < 1, 꼬리 적분",
        group=CheckGroup.CLOSED_FORM,
        cost=CheckCost.MEDIUM,
        run=check_exact_identities,
    ),
    "mechanism_simulation": CheckDefinition(
        name="mechanism_simulation",
        criterion=6,
        description="Proportional / separate 수익 Monte Carlo 대조",
        group=CheckGroup.STOCHASTIC,
        cost=CheckCost.HIGH,
        run=check_mechanism_simulation,
    ),
    "lp_oracle": CheckDefinition(
        name="lp_oracle",
        criterion=7,
        description="격자 LP 값과 폐형식 상한 비교",
        group=CheckGroup.ORACLE,
        cost=CheckCost.HIGH,
        run=check_lp_oracle,
    ),
    "brev_dominance": CheckDefinition(
        name="brev_dominance",
        criterion=8,
        description="BRev ≥ m/4 (m ≤ 100)",
        group=CheckGroup.NUMERIC,
        cost=CheckCost.MEDIUM,
        run=check_brev_dominance,
    ),
}


def get_check(name: str) -> CheckDefinition | None:
    """점검 정의 반환."""
    return CHECK_DEFINITIONS.get(name)


def checks_for_criteria(criteria: list[int] | None) -> list[CheckDefinition]:
    """criterion 번호에 해당하는 점검 (None이면 전체, 번호 순).

    Raises:
        ValueError: 정의되지 않은 criterion 번호
    """
    by_criterion = {c.criterion: c for c in CHECK_DEFINITIONS.values()}
    if criteria is None:
        return sorted(by_criterion.values(), key=lambda c: c.criterion)
    unknown = sorted(set(criteria) - set(by_criterion))
    if unknown:
        raise ValueError(f"알 수 없는 criterion: {unknown}")
    return [by_criterion[c] for c in sorted(set(criteria))]


def get_check_manifest_text() -> str:
    """점검 목록 설명 (verbose 출력용)."""
    lines = ["Acceptance 점검:", ""]
    for group in CheckGroup:
        group_checks = [c for c in CHECK_DEFINITIONS.values() if c.group == group]
        if not group_checks:
            continue
        lines.append(f"## {group.value.upper()}")
        for check in group_checks:
            lines.append(f"- [{check.criterion}] **{check.name}** ({check.cost.value}): {check.description}")
        lines.append("")
    return "\n".join(lines)
