"""Revised simplex for min c·u s.t. A u = r, u ≥ 0.

A는 scipy.sparse 행렬, 기저 역행렬 B⁻¹은 dense로 유지하고 주기적으로 다시 계산한다.
진입 변수는 Dantzig 규칙으로 고르고, 퇴화 pivot이 이어지면 Bland 규칙으로 바꾼다.
"""

import logging
from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy import sparse

logger = logging.getLogger(__name__)

PIVOT_TOLERANCE = 1e-9
REDUCED_COST_TOLERANCE = 1e-10
DEGENERATE_STEP = 1e-12
BLAND_AFTER = 50
REFACTOR_EVERY = 100


class SimplexStatus(str, Enum):
    """Solver 종료 상태."""

    OPTIMAL = "optimal"
    ITERATION_LIMIT = "iteration-limit"


class SimplexResult(BaseModel):
    """Revised simplex 결과.

    Attributes:
        basis: 행별 기저 열 인덱스
        x_basic: 기저 변수 값
        multipliers: simplex multiplier π = c_B B⁻¹ (dual 해)
        objective: c·u
        pivots: pivot 횟수
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    status: SimplexStatus
    basis: np.ndarray
    x_basic: np.ndarray
    multipliers: np.ndarray
    objective: float
    pivots: int


def _factor(a: sparse.csc_matrix, basis: np.ndarray, r: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    b_inv = np.linalg.inv(a[:, basis].toarray())
    x_b = b_inv @ r
    # 반올림으로 생긴 미세한 음수 제거
    x_b[np.abs(x_b) < DEGENERATE_STEP] = 0.0
    return b_inv, x_b


def revised_simplex(
    a: sparse.spmatrix,
    r: np.ndarray,
    cost: np.ndarray,
    basis: np.ndarray,
    max_pivots: int,
) -> SimplexResult:
    """Feasible 초기 기저에서 출발하는 단일 phase revised simplex.

    Args:
        a: (R, N) 제약 행렬
        r: (R,) 우변
        cost: (N,) 최소화 비용
        basis: (R,) 실행 가능한 초기 기저 열
        max_pivots: pivot 상한

    Returns:
        SimplexResult

    Raises:
        RuntimeError: 목적함수가 유계가 아니거나 초기 기저가 실행 불가능할 때
    """
    a = sparse.csc_matrix(a)
    a_t = a.T.tocsr()
    basis = np.asarray(basis, dtype=np.int64).copy()
    b_inv, x_b = _factor(a, basis, r)
    if np.any(x_b < -PIVOT_TOLERANCE):
        raise RuntimeError("초기 기저가 실행 가능하지 않습니다.")

    n_cols = a.shape[1]
    in_basis = np.zeros(n_cols, dtype=bool)
    in_basis[basis] = True
    degenerate_streak = 0
    status = SimplexStatus.ITERATION_LIMIT
    pivots = 0

    while pivots < max_pivots:
        if pivots and pivots % REFACTOR_EVERY == 0:
            b_inv, x_b = _factor(a, basis, r)

        pi = cost[basis] @ b_inv
        reduced = cost - a_t @ pi
        reduced[in_basis] = 0.0

        bland = degenerate_streak >= BLAND_AFTER
        if bland:
            candidates = np.flatnonzero(reduced < -REDUCED_COST_TOLERANCE)
            if candidates.size == 0:
                status = SimplexStatus.OPTIMAL
                break
            q = int(candidates[0])
        else:
            q = int(np.argmin(reduced))
            if reduced[q] >= -REDUCED_COST_TOLERANCE:
                status = SimplexStatus.OPTIMAL
                break

        alpha = b_inv @ a[:, q].toarray().ravel()
        rows = np.flatnonzero(alpha > PIVOT_TOLERANCE)
        if rows.size == 0:
            raise RuntimeError("LP가 유계가 아닙니다.")
        ratios = x_b[rows] / alpha[rows]
        theta = float(ratios.min())
        ties = rows[ratios <= theta + DEGENERATE_STEP]
        if bland:
            leave = int(ties[np.argmin(basis[ties])])
        else:
            leave = int(ties[np.argmax(alpha[ties])])

        # 기저 갱신
        x_b = x_b - theta * alpha
        x_b[leave] = theta
        np.maximum(x_b, 0.0, out=x_b)
        pivot_row = b_inv[leave] / alpha[leave]
        b_inv -= np.outer(alpha, pivot_row)
        b_inv[leave] = pivot_row

        in_basis[basis[leave]] = False
        in_basis[q] = True
        basis[leave] = q
        pivots += 1
        degenerate_streak = degenerate_streak + 1 if theta <= DEGENERATE_STEP else 0

        if pivots % 1000 == 0:
            logger.debug("simplex pivot=%d objective=%.12g bland=%s", pivots, float(cost[basis] @ x_b), bland)

    b_inv, x_b = _factor(a, basis, r)
    pi = cost[basis] @ b_inv
    objective = float(cost[basis] @ x_b)
    logger.info("simplex %s after %d pivots, objective=%.12g", status.value, pivots, objective)
    return SimplexResult(
        status=status,
        basis=basis,
        x_basic=x_b,
        multipliers=pi,
        objective=objective,
        pivots=pivots,
    )
