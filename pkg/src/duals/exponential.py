"""Exponential-domain dual solution and its verification.

z_j(x) = max{0, λ̂ x_j w^{-m} g(m,w)},  w = Σ λ_j x_j,  λ̂ = Π λ_j
제약: z_j(0, x_{-j}) = 0,  Σ_j ∂z_j/∂x_j ≤ λ̂ (m+1-w) e^{-w}

w^{-m} g(m,w) = e^{-w} r(w),  r(w) = 1 - Σ_{k<m} (m-1)!/k! · w^{k-m}
로 쓰면 큰 w에서도 오버플로 없이 계산된다. r(w) > 0 ⇔ w > γ*_m.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator
from scipy.stats import qmc

from src.bounds import exponential_upper_bound
from src.config import settings
from src.duals.schemas import BranchGap, DualFamily, FeasibilityReport, ObjectiveMethod
from src.errors import GridTooCoarseError, TruncationInsufficientError
from src.gamma import gamma_star, log_upper_incomplete_gamma

logger = logging.getLogger(__name__)

MAX_EXPONENTIAL_M = 3
TRUNCATION_MARGIN = 40.0
DERIVATIVE_TOLERANCE = 1e-9
TAIL_TOLERANCE = 1e-6
MAX_SKIPPED_FRACTION = 0.2
DEFAULT_GRID = {1: 20000, 2: 400, 3: 60}
# midpoint objective 격자 최소 크기 (m=3은 quasi-random)
OBJECTIVE_GRID = {1: 20000, 2: 1600}
QMC_BATCH_LOG2 = 20


class ExponentialDual(BaseModel):
    """독립 exponential prior에 대한 dual."""

    model_config = ConfigDict(frozen=True)

    lambdas: tuple[float, ...] = Field(min_length=1, description="exponential rate")

    @field_validator("lambdas")
    @classmethod
    def _check_rates(cls, value: tuple[float, ...]) -> tuple[float, ...]:
        if any(not math.isfinite(r) or r <= 0 for r in value):
            raise ValueError(f"rate는 양수여야 합니다: {value}")
        return value

    @property
    def m(self) -> int:
        return len(self.lambdas)

    @property
    def rates(self) -> np.ndarray:
        return np.asarray(self.lambdas, dtype=float)

    @property
    def lambda_hat(self) -> float:
        return math.prod(self.lambdas)

    @property
    def gamma_star(self) -> float:
        return gamma_star(self.m)

    def ratio(self, w: np.ndarray) -> np.ndarray:
        """r(w) = e^{w} w^{-m} g(m,w)."""
        m = self.m
        w = np.maximum(np.asarray(w, dtype=float), np.finfo(float).tiny)
        total = np.zeros_like(w)
        coef = 1.0
        # k = m-1, m-2, ..., 0 : coef = (m-1)!/k!
        with np.errstate(over="ignore"):
            for k in range(m - 1, -1, -1):
                total = total + coef * w ** (k - m)
                coef *= k if k > 0 else 1
        return 1.0 - total

    def active_branch(self, x: np.ndarray) -> np.ndarray:
        """max 없이 λ̂ x_j w^{-m} g(m,w) (n, m)."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        w = x @ self.rates
        base = self.lambda_hat * np.exp(-w) * self.ratio(w)
        return x * base[:, None]

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        w = x @ self.rates
        r = self.ratio(w)
        base = np.where(r > 0, self.lambda_hat * np.exp(-w) * np.maximum(r, 0.0), 0.0)
        return x * base[:, None]

    def partials(self, x: np.ndarray) -> np.ndarray:
        """해석적 ∂z_j/∂x_j (w < γ*에서는 0)."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        m = self.m
        w = x @ self.rates
        r = self.ratio(w)
        ew = np.exp(-w)
        dw = ew * ((m + 1 - w) - m * r) / np.maximum(w, np.finfo(float).tiny)
        value = self.lambda_hat * (ew * r)[:, None] + self.lambda_hat * self.rates * x * dw[:, None]
        return np.where((r > 0)[:, None], value, 0.0)

    def derivative_cap(self, x: np.ndarray) -> np.ndarray:
        """λ̂ (m+1-w) e^{-w}."""
        w = np.atleast_2d(np.asarray(x, dtype=float)) @ self.rates
        return self.lambda_hat * (self.m + 1 - w) * np.exp(-w)

    def objective_closed_form(self) -> float:
        return exponential_upper_bound(self.lambdas)


def tail_bound(dual: ExponentialDual, w_max: float) -> float:
    """{w > w_max} 영역 objective 상한 w_max·Γ(m, w_max)/m! · Σ 1/λ_j."""
    m = dual.m
    log_tail = math.log(w_max) + log_upper_incomplete_gamma(m, w_max)[0] - math.lgamma(m + 1)
    return math.exp(log_tail) * math.fsum(1.0 / dual.rates)


def _five_point(f, pts: np.ndarray, j: int, h: float) -> np.ndarray:
    """축 j 방향 5-point 중심차분 (f의 j번째 성분)."""

    def shifted(s: float) -> np.ndarray:
        p = pts.copy()
        p[:, j] += s * h
        return f(p)[:, j]

    return (-shifted(2) + 8 * shifted(1) - 8 * shifted(-1) + shifted(-2)) / (12 * h)


def _cell_axes(dual: ExponentialDual, n: int, w_max: float) -> tuple[list[np.ndarray], np.ndarray]:
    widths = w_max / dual.rates / n
    mids = [(np.arange(n) + 0.5) * widths[j] for j in range(dual.m)]
    return mids, widths


def _grid(mids: list[np.ndarray]) -> np.ndarray:
    if not mids:
        return np.zeros((1, 0))
    mesh = np.meshgrid(*mids, indexing="ij")
    return np.stack(mesh, axis=-1).reshape(-1, len(mids))


def _derivative_slice(dual: ExponentialDual, x0: float, rest: np.ndarray, widths: np.ndarray, h: float):
    """첫 좌표 x0 slice의 kink 셀 수와 미분 잔차."""
    x = np.column_stack([np.full(rest.shape[0], x0), rest])
    w = x @ dual.rates
    half_span = 0.5 * float(widths @ dual.rates)
    gs = dual.gamma_star
    crossing = np.abs(w - gs) < half_span
    pts = x[~crossing]
    if pts.shape[0] == 0:
        return int(crossing.sum()), 0, 0.0, 0.0, 0

    fd = np.column_stack([_five_point(dual.evaluate, pts, j, h) for j in range(dual.m)])
    residual = np.maximum(fd.sum(axis=1) - dual.derivative_cap(pts), 0.0)
    mismatch = float(np.max(np.abs(fd - dual.partials(pts))))
    return (
        int(crossing.sum()),
        pts.shape[0],
        float(residual.max()),
        mismatch,
        int(np.sum(residual > DERIVATIVE_TOLERANCE)),
    )


def _midpoint_objective(dual: ExponentialDual, n: int, w_max: float, workers: int) -> float:
    mids, widths = _cell_axes(dual, n, w_max)
    rest = _grid(mids[1:])
    volume = float(np.prod(widths))

    def row(x0: float) -> float:
        x = np.column_stack([np.full(rest.shape[0], x0), rest])
        return float(dual.evaluate(x).sum()) * volume

    with ThreadPoolExecutor(max_workers=workers) as pool:
        return math.fsum(pool.map(row, mids[0]))


def _qmc_objective(dual: ExponentialDual, w_max: float, log2_points: int, seed: int) -> float:
    """절단 exponential 중요도 변환 후 scrambled Sobol 평균.

    x_j = -ln(1 - u_j (1 - e^{-w_max})) / λ_j 의 밀도는 λ̂ e^{-w} / (1 - e^{-w_max})^m 이므로
    적분값 = (1 - e^{-w_max})^m · E[Σ_j x_j · max(r(w), 0)].
    """
    m = dual.m
    sampler = qmc.Sobol(d=m, scramble=True, seed=seed)
    scale = -math.expm1(-w_max)
    batch = 1 << min(QMC_BATCH_LOG2, log2_points)
    n_batches = 1 << (log2_points - min(QMC_BATCH_LOG2, log2_points))
    total = 0.0
    for _ in range(n_batches):
        u = sampler.random(batch)
        x = -np.log1p(-u * scale) / dual.rates
        w = x @ dual.rates
        total += float(np.sum(x.sum(axis=1) * np.maximum(dual.ratio(w), 0.0)))
    return scale**m * total / (batch * n_batches)


def verify_exponential_dual(
    lambdas: Sequence[float],
    grid_points_per_axis: int | None = None,
    w_max: float | None = None,
    qmc_log2_points: int | None = None,
    seed: int | None = None,
    max_workers: int | None = None,
) -> FeasibilityReport:
    """Exponential dual의 제약과 objective를 점검한다.

    상자 Π_j [0, w_max/λ_j] 의 셀 중심에서 5-point 차분으로 편미분 합을 점검하고
    (w = γ*_m 를 가로지르는 셀은 건너뜀), objective는 m ≤ 2이면 midpoint rule,
    m = 3이면 scrambled Sobol 적분으로 구한다.

    Args:
        lambdas: rate (m ≤ 3)
        grid_points_per_axis: 축당 셀 수 (기본: m별 기본값)
        w_max: 절단 w (≥ γ*_m + 40, 기본: max(50, γ*_m + 40))
        qmc_log2_points: Sobol 점 수 log2 (기본: settings.qmc_log2_points)
        seed: Sobol scramble seed

    Raises:
        TruncationInsufficientError: 절단 영역 상한이 폐형식의 1e-6을 넘을 때
        GridTooCoarseError: 건너뛴 셀이 20%를 넘을 때
    """
    dual = ExponentialDual(lambdas=tuple(float(r) for r in lambdas))
    m = dual.m
    if m > MAX_EXPONENTIAL_M:
        raise ValueError(f"exponential dual 점검은 m ≤ {MAX_EXPONENTIAL_M}만 지원합니다: {m}")
    gs = dual.gamma_star
    if w_max is None:
        w_max = max(50.0, gs + TRUNCATION_MARGIN)
    if w_max < gs + TRUNCATION_MARGIN:
        raise ValueError(f"w_max는 γ*_m + {TRUNCATION_MARGIN:g} 이상이어야 합니다: {w_max}")
    n = grid_points_per_axis or DEFAULT_GRID[m]
    workers = max_workers or settings.max_workers
    seed = settings.default_seed if seed is None else seed

    closed = dual.objective_closed_form()
    tail = tail_bound(dual, w_max)
    if tail > TAIL_TOLERANCE * closed:
        raise TruncationInsufficientError(f"w_max={w_max}: 꼬리 상한 {tail:.3e} > {TAIL_TOLERANCE:g}·{closed:.6g}")

    mids, widths = _cell_axes(dual, n, w_max)
    h = min(settings.fd_step_exponential, float(widths.min()) / 8)
    rest = _grid(mids[1:])
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda x0: _derivative_slice(dual, x0, rest, widths, h), mids[0]))

    skipped = sum(p[0] for p in parts)
    if skipped > MAX_SKIPPED_FRACTION * n**m:
        raise GridTooCoarseError(f"λ={list(lambdas)}, grid={n}: kink 셀 {skipped}/{n**m}")

    # z_j(0, x_{-j}) = 0
    boundary = 0.0
    for j in range(m):
        face = _grid([mids[i] for i in range(m) if i != j])
        x = np.insert(face, j, 0.0, axis=1)
        boundary = max(boundary, float(np.max(np.abs(dual.evaluate(x)[:, j]))))

    if m <= 2:
        objective = _midpoint_objective(dual, max(n, OBJECTIVE_GRID[m]), w_max, workers)
        method = ObjectiveMethod.MIDPOINT
    else:
        objective = _qmc_objective(dual, w_max, qmc_log2_points or settings.qmc_log2_points, seed)
        method = ObjectiveMethod.QUASI_RANDOM

    report = FeasibilityReport(
        family=DualFamily.EXPONENTIAL,
        m=m,
        lambdas=list(dual.lambdas),
        grid_points_per_axis=n,
        w_max=w_max,
        cells_checked=sum(p[1] for p in parts),
        cells_skipped_at_kinks=skipped,
        max_boundary_residual=boundary,
        max_derivative_residual=max(p[2] for p in parts),
        max_analytic_mismatch=max(p[3] for p in parts),
        derivative_violations=sum(p[4] for p in parts),
        derivative_tolerance=DERIVATIVE_TOLERANCE,
        objective_numeric=objective,
        objective_closed_form=closed,
        objective_method=method,
        objective_tolerance=1e-3 if m <= 2 else 5e-3,
        tail_bound=tail,
    )
    logger.info("exponential dual λ=%s gap=%.2e skipped=%d ok=%s", list(lambdas), report.relative_gap, skipped, report.ok)
    return report


def exponential_branch_gap(lambdas: Sequence[float], delta: float = 1e-9, tolerance: float = 1e-7) -> BranchGap:
    """w = γ*_m ± δ 에서 활성 분기식이 0에 붙어 있는지 (z의 연속성) 확인한다."""
    dual = ExponentialDual(lambdas=tuple(float(r) for r in lambdas))
    gs = dual.gamma_star

    def on_level(w: float) -> np.ndarray:
        # 대각선 위 점 λ_j x_j = w/m
        return (w / dual.m / dual.rates)[None, :]

    below = float(np.max(np.abs(dual.active_branch(on_level(gs - delta)))))
    above = float(np.max(np.abs(dual.active_branch(on_level(gs + delta)))))
    return BranchGap(m=dual.m, gamma_star=gs, delta=delta, below=below, above=above, tolerance=tolerance)
