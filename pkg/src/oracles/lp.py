"""Discretized revenue LP on a tensor grid of types.

type i (가치 x_i, 질량 f_i)마다 변수 a_i ∈ [0,1]^m, p_i (부호 제한 없음):

    max Σ_i f_i p_i
    s.t. (a_k - a_i)·x_i + p_i - p_k ≤ 0   (IC, i ≠ k)
         p_i - a_i·x_i ≤ 0                 (IR)
         a_ij ≤ 1,  a ≥ 0

이 LP의 dual을 revised simplex로 풀고, 최적 기저의 multiplier에서 (a, p)를 복원한다.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, computed_field
from scipy import sparse

from src.config import settings
from src.errors import SizeLimitError
from src.oracles.simplex import SimplexStatus, revised_simplex
from src.priors import PriorKind, ProductPrior, cdf, inverse_cdf

logger = logging.getLogger(__name__)

MAX_LP_M = 2
MAX_LP_TYPES = 625
FEASIBILITY_TOLERANCE = 1e-8


class LPInstance(BaseModel):
    """격자 type과 질량.

    격자점 x_i는 셀 [x_i, x_{i+1})의 확률을 가진다 (가치를 아래로 내림).
    uniform의 마지막 점 1은 질량 0, exponential의 마지막 점은 꼬리 [x_{n-1}, ∞)를 가진다.

    Attributes:
        grid: (T, m) 사전식 정렬된 가치 벡터
        masses: (T,) 확률 질량
        axis: 축별 격자 좌표 (모든 축 동일 간격)
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    prior: ProductPrior
    points_per_axis: int = Field(ge=2)
    quantile: float | None = None
    grid: np.ndarray
    masses: np.ndarray

    @property
    def m(self) -> int:
        return self.prior.m

    @property
    def n_types(self) -> int:
        return self.grid.shape[0]

    @property
    def n_ic_constraints(self) -> int:
        return self.n_types * (self.n_types - 1)


class LPSolution(BaseModel):
    """LP 최적해 (또는 pivot 상한에서 멈춘 해)."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    value: float = Field(description="기대 수익 Σ f_i p_i")
    allocations: np.ndarray
    payments: np.ndarray
    status: SimplexStatus
    pivots: int
    dual_objective: float = Field(description="dual LP 목적값 (강쌍대성 점검용)")


class LPCheck(BaseModel):
    """열거로 다시 계산한 제약 잔차."""

    max_ic_violation: float
    max_ir_violation: float
    max_range_violation: float
    tolerance: float = FEASIBILITY_TOLERANCE

    @computed_field
    @property
    def ok(self) -> bool:
        return max(self.max_ic_violation, self.max_ir_violation, self.max_range_violation) <= self.tolerance


def _axis(prior: ProductPrior, j: int, n: int, quantile: float) -> tuple[np.ndarray, np.ndarray]:
    """축 j의 격자 좌표와 셀 질량 (CDF 차분)."""
    factor = prior.factors[j]
    if factor.kind is PriorKind.UNIFORM:
        upper = 1.0
    else:
        upper = inverse_cdf(factor, quantile)
    points = np.arange(n) / (n - 1) * upper
    edges = cdf(factor, points)
    masses = np.empty(n)
    masses[:-1] = np.diff(edges)
    masses[-1] = 1.0 - edges[-1]
    return points, masses


def build_lp(prior: ProductPrior, points_per_axis: int, quantile: float = 0.999) -> LPInstance:
    """Product prior를 격자 type 분포로 이산화.

    Args:
        prior: uniform i.i.d. 또는 exponential product prior (m ≤ 2)
        points_per_axis: 축당 격자점 수 n
        quantile: exponential 절단 분위수 q

    Raises:
        SizeLimitError: m > 2 또는 type 수 n^m > 625
    """
    m = prior.m
    n = points_per_axis
    if m > MAX_LP_M:
        raise SizeLimitError(f"LP는 m ≤ {MAX_LP_M}만 지원합니다: m={m}")
    if n < 2:
        raise ValueError(f"points_per_axis는 2 이상이어야 합니다: {n}")
    if n**m > MAX_LP_TYPES:
        raise SizeLimitError(f"type 수 {n}^{m} 이 {MAX_LP_TYPES}를 넘습니다 (m=2이면 n ≤ 25).")
    if not 0.0 < quantile < 1.0:
        raise ValueError(f"quantile은 (0, 1) 범위여야 합니다: {quantile}")

    axes = [_axis(prior, j, n, quantile) for j in range(m)]
    # indexing="ij" 이면 reshape 결과가 사전식 순서
    grid = np.stack(np.meshgrid(*[a[0] for a in axes], indexing="ij"), axis=-1).reshape(-1, m)
    masses = np.ones(1)
    for _, w in axes:
        masses = np.multiply.outer(masses, w)
    masses = masses.reshape(-1)
    masses = masses / math.fsum(masses)

    is_exp = prior.kind is PriorKind.EXPONENTIAL
    return LPInstance(
        prior=prior,
        points_per_axis=n,
        quantile=quantile if is_exp else None,
        grid=grid,
        masses=masses,
    )


def _dual_program(instance: LPInstance):
    """Dual LP  min Σ u_cap  s.t. E u = r, u ≥ 0 의 (E, r, cost, 초기 기저).

    행: a-행 (i, j) → i*m + j, p-행 i → T*m + i.
    열: IC(i,k) | IR(i) | cap(i,j) | surplus(i,j).
    """
    x = instance.grid
    f = instance.masses
    t, m = x.shape
    n_rows = t * m + t
    p_row = t * m + np.arange(t)

    ii, kk = np.nonzero(~np.eye(t, dtype=bool))
    n_ic = ii.size
    ic_cols = np.arange(n_ic)
    j_idx = np.arange(m)

    rows, cols, vals = [], [], []
    # IC(i,k): p_i +1, p_k -1, a_i,j -x_ij, a_k,j +x_ij
    rows += [p_row[ii], p_row[kk]]
    cols += [ic_cols, ic_cols]
    vals += [np.ones(n_ic), -np.ones(n_ic)]
    xi = x[ii]
    rows += [(ii[:, None] * m + j_idx).ravel(), (kk[:, None] * m + j_idx).ravel()]
    cols += [np.repeat(ic_cols, m)] * 2
    vals += [-xi.ravel(), xi.ravel()]

    # IR(i): p_i +1, a_i,j -x_ij
    ir_cols = n_ic + np.arange(t)
    rows += [p_row, (np.arange(t)[:, None] * m + j_idx).ravel()]
    cols += [ir_cols, np.repeat(ir_cols, m)]
    vals += [np.ones(t), -x.ravel()]

    # cap(i,j) +1, surplus(i,j) -1
    a_rows = np.arange(t * m)
    cap_cols = n_ic + t + a_rows
    surplus_cols = n_ic + t + t * m + a_rows
    rows += [a_rows, a_rows]
    cols += [cap_cols, surplus_cols]
    vals += [np.ones(t * m), -np.ones(t * m)]

    n_cols = n_ic + t + 2 * t * m
    e = sparse.csc_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n_rows, n_cols),
    )
    r = np.concatenate([np.zeros(t * m), f])
    cost = np.zeros(n_cols)
    cost[cap_cols] = 1.0
    # u_IR(i) = f_i, u_cap(i,j) = x_ij f_i 가 실행 가능한 초기 기저
    basis = np.concatenate([cap_cols, ir_cols])
    return e, r, cost, basis


def solve_lp(instance: LPInstance, max_pivots: int | None = None) -> LPSolution:
    """격자 LP를 풀어 수익 최대 메커니즘을 구한다.

    결과는 instance만으로 결정된다 (고정된 pivot 규칙).
    """
    m = instance.m
    t = instance.n_types
    e, r, cost, basis = _dual_program(instance)
    logger.info("LP m=%d types=%d rows=%d cols=%d", m, t, e.shape[0], e.shape[1])

    result = revised_simplex(e, r, cost, basis, max_pivots or settings.lp_max_pivots)
    pi = result.multipliers
    allocations = np.clip(pi[: t * m].reshape(t, m), 0.0, 1.0)
    payments = pi[t * m :].copy()
    value = math.fsum(instance.masses * payments)
    if result.status is SimplexStatus.OPTIMAL and abs(value - result.objective) > 1e-7 * max(1.0, abs(value)):
        logger.warning("LP primal %.12g 와 dual %.12g 가 어긋납니다.", value, result.objective)
    return LPSolution(
        value=value,
        allocations=allocations,
        payments=payments,
        status=result.status,
        pivots=result.pivots,
        dual_objective=result.objective,
    )


def solve_many(instances: list[LPInstance], max_workers: int | None = None) -> list[LPSolution]:
    """여러 인스턴스를 thread pool에서 병렬로 풀기 (순서 유지)."""
    with ThreadPoolExecutor(max_workers=max_workers or settings.max_workers) as pool:
        return list(pool.map(solve_lp, instances))


def check_lp_solution(instance: LPInstance, solution: LPSolution) -> LPCheck:
    """모든 type 쌍의 IC, IR, 할당 범위를 직접 열거해 점검."""
    x = instance.grid
    a = solution.allocations
    p = solution.payments
    # utility[i, k] = a_k·x_i - p_k
    utility = x @ a.T - p[None, :]
    truthful = np.diag(utility)
    ic = float(np.max(utility - truthful[:, None]))
    ir = float(max(0.0, np.max(-truthful)))
    out_of_range = float(max(0.0, np.max(-a), np.max(a - 1.0)))
    return LPCheck(
        max_ic_violation=max(ic, 0.0),
        max_ir_violation=ir,
        max_range_violation=out_of_range,
    )
