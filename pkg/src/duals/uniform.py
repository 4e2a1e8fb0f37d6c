"""Uniform-domain dual solutions and their grid verification.

제약 (x ∈ [0,1]^m):
    z_j(0, x_{-j}) = 0,  z_j(1, x_{-j}) ≥ 1,  Σ_j ∂z_j/∂x_j ≤ m + 1
objective Σ_j ∫ z_j(x) dx 는 최적 수익의 상한이다.
"""

import logging
import math
from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.bounds import uniform_upper_bound
from src.config import settings
from src.duals.schemas import DualFamily, FeasibilityReport, ObjectiveMethod
from src.errors import GridTooCoarseError

logger = logging.getLogger(__name__)

MAX_UNIFORM_M = 4
MIN_GRID = 50
MAX_SKIPPED_FRACTION = 0.2
DERIVATIVE_TOLERANCE = 1e-6


class UniformDualBase(BaseModel, ABC):
    """[0,1]^m 위 dual 함수 z = (z_1, ..., z_m)."""

    model_config = ConfigDict(frozen=True)

    m: int = Field(ge=1, description="아이템 수")

    @property
    @abstractmethod
    def family(self) -> DualFamily: ...

    @abstractmethod
    def evaluate(self, x: np.ndarray) -> np.ndarray:
        """(n, m) 점에서 z 값 (n, m)."""

    @abstractmethod
    def partials(self, x: np.ndarray) -> np.ndarray:
        """해석적 대각 편미분 ∂z_j/∂x_j (n, m)."""

    @abstractmethod
    def kinks(self) -> tuple[Fraction, ...]:
        """각 축에서 z가 매끄럽지 않은 좌표."""

    @abstractmethod
    def objective_closed_form(self) -> float: ...


class UniformDual(UniformDualBase):
    """kink 좌표 1/(m+1)로 나눈 부분공간별 선형 dual.

    v_j = [x_j > 1/(m+1)], k = Σ v_j, c_k = 1 - k/(m+1),
    z_j = 0 (v_j = 0), max{0, (m+1)/k · (x_j - c_k)} (v_j = 1).
    """

    @property
    def family(self) -> DualFamily:
        return DualFamily.UNIFORM

    def _active(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        m = self.m
        v = x > 1.0 / (m + 1)
        k = v.sum(axis=1, keepdims=True)
        safe_k = np.maximum(k, 1)
        c = 1.0 - k / (m + 1)
        return x, v, (m + 1) / safe_k, c

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        x, v, slope, c = self._active(x)
        return np.where(v, np.maximum(0.0, slope * (x - c)), 0.0)

    def partials(self, x: np.ndarray) -> np.ndarray:
        x, v, slope, c = self._active(x)
        return np.where(v & (x > c), np.broadcast_to(slope, x.shape), 0.0)

    def kinks(self) -> tuple[Fraction, ...]:
        # 1/(m+1)과 c_k = (m+1-k)/(m+1)는 모두 t/(m+1) 꼴
        return tuple(Fraction(t, self.m + 1) for t in range(1, self.m + 1))

    def objective_closed_form(self) -> float:
        return uniform_upper_bound(self.m)


class TrivialUniformDual(UniformDualBase):
    """편미분 합을 균등 분배한 dual z_j = (m+1)/m · x_j (objective (m+1)/2)."""

    @property
    def family(self) -> DualFamily:
        return DualFamily.UNIFORM_TRIVIAL

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        return (self.m + 1) / self.m * x

    def partials(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        return np.full_like(x, (self.m + 1) / self.m)

    def kinks(self) -> tuple[Fraction, ...]:
        return ()

    def objective_closed_form(self) -> float:
        return (self.m + 1) / 2


def trivial_uniform_dual(m: int) -> TrivialUniformDual:
    return TrivialUniformDual(m=m)


def _smooth_cells(n_cells: int, kinks: tuple[Fraction, ...]) -> np.ndarray:
    """축의 셀 i = [i/n, (i+1)/n] 내부에 kink가 없으면 True (정수 산술)."""
    smooth = np.ones(n_cells, dtype=bool)
    for kink in kinks:
        scaled = kink * n_cells
        if scaled.denominator != 1:
            smooth[math.floor(scaled)] = False
    return smooth


def _axis_quadrature(n_cells: int, kinks: tuple[Fraction, ...]) -> tuple[np.ndarray, np.ndarray]:
    """축의 midpoint 노드와 가중치. kink가 있는 셀은 kink에서 나눠 조각마다 중점을 쓴다."""
    nodes: list[float] = []
    weights: list[float] = []
    for i in range(n_cells):
        lo, hi = Fraction(i, n_cells), Fraction(i + 1, n_cells)
        cuts = [lo, *sorted(k for k in kinks if lo < k < hi), hi]
        for a, b in zip(cuts, cuts[1:]):
            nodes.append(float((a + b) / 2))
            weights.append(float(b - a))
    return np.array(nodes), np.array(weights)


def _cartesian(axis: np.ndarray, dim: int) -> np.ndarray:
    """axis^dim 격자점 (N, dim)."""
    if dim == 0:
        return np.zeros((1, 0))
    mesh = np.meshgrid(*([axis] * dim), indexing="ij")
    return np.stack(mesh, axis=-1).reshape(-1, dim)


def _objective_slice(dual: UniformDualBase, x0: float, w0: float, rest: np.ndarray, rest_weights: np.ndarray) -> float:
    """첫 좌표 노드 x0에서 Σ_j z_j 의 가중합."""
    x = np.column_stack([np.full(rest.shape[0], x0), rest])
    return w0 * math.fsum(dual.evaluate(x).sum(axis=1) * rest_weights)


def _verify_slice(dual: UniformDualBase, i0: int, mids: np.ndarray, smooth: np.ndarray, rest: np.ndarray, rest_smooth: np.ndarray):
    """첫 좌표를 mids[i0]로 고정한 slice의 매끄러운 셀 미분 잔차."""
    m = dual.m
    n = mids.size
    step = 1.0 / n
    x = np.column_stack([np.full(rest.shape[0], mids[i0]), rest])
    mask = rest_smooth & smooth[i0]
    pts = x[mask]
    if pts.shape[0] == 0:
        return 0, 0.0, 0.0, 0

    half = step / 2
    fd = np.empty_like(pts)
    for j in range(m):
        up, down = pts.copy(), pts.copy()
        up[:, j] += half
        down[:, j] -= half
        fd[:, j] = (dual.evaluate(up)[:, j] - dual.evaluate(down)[:, j]) / step
    total = fd.sum(axis=1)
    residual = np.maximum(np.maximum(total - (m + 1), -total), 0.0)
    mismatch = float(np.max(np.abs(fd - dual.partials(pts))))
    violations = int(np.sum(residual > DERIVATIVE_TOLERANCE))
    return pts.shape[0], float(residual.max()), mismatch, violations


def _boundary_residual(dual: UniformDualBase, mids: np.ndarray) -> float:
    """면 x_j = 0에서 |z_j|, x_j = 1에서 max(0, 1 - z_j)."""
    m = dual.m
    face = _cartesian(mids, m - 1)
    worst = 0.0
    for j in range(m):
        for value in (0.0, 1.0):
            x = np.insert(face, j, value, axis=1)
            z = dual.evaluate(x)[:, j]
            res = np.abs(z) if value == 0.0 else np.maximum(1.0 - z, 0.0)
            worst = max(worst, float(res.max()))
    return worst


def verify_uniform_dual(
    m: int,
    grid_points_per_axis: int,
    dual: UniformDualBase | None = None,
    max_workers: int | None = None,
) -> FeasibilityReport:
    """Uniform dual의 제약과 objective를 셀 격자에서 점검한다.

    - 경계 조건은 면 위 격자점에서 점검
    - Σ_j ∂z_j/∂x_j 는 kink를 가로지르지 않는 셀 중심에서 중심차분(h = 셀 폭의 절반)
    - objective는 kink에서 셀을 나눈 조각별 midpoint rule (조각 안에서 z는 선형)

    Args:
        m: 아이템 수 (1..4)
        grid_points_per_axis: 축당 셀 수 (≥ 50)
        dual: 점검할 dual (기본: UniformDual(m))
        max_workers: thread 수

    Raises:
        GridTooCoarseError: 건너뛴 셀이 20%를 넘을 때
    """
    if not 1 <= m <= MAX_UNIFORM_M:
        raise ValueError(f"uniform dual 점검은 m = 1..{MAX_UNIFORM_M}만 지원합니다: {m}")
    if grid_points_per_axis < MIN_GRID:
        raise ValueError(f"grid는 {MIN_GRID} 이상이어야 합니다: {grid_points_per_axis}")
    dual = dual or UniformDual(m=m)
    if dual.m != m:
        raise ValueError(f"dual 차원 {dual.m} ≠ m {m}")

    n = grid_points_per_axis
    mids = (np.arange(n) + 0.5) / n
    smooth = _smooth_cells(n, dual.kinks())
    total_cells = n**m
    smooth_cells = int(smooth.sum()) ** m
    skipped = total_cells - smooth_cells
    if skipped > MAX_SKIPPED_FRACTION * total_cells:
        raise GridTooCoarseError(
            f"m={m}, grid={n}: kink 셀 {skipped}/{total_cells} 가 {MAX_SKIPPED_FRACTION:.0%}를 넘습니다."
        )

    rest = _cartesian(mids, m - 1)
    rest_idx = _cartesian(np.arange(n), m - 1).astype(int)
    rest_smooth = np.all(smooth[rest_idx], axis=1) if m > 1 else np.ones(1, dtype=bool)

    nodes, weights = _axis_quadrature(n, dual.kinks())
    rest_nodes = _cartesian(nodes, m - 1)
    rest_weights = np.prod(_cartesian(weights, m - 1), axis=1)

    workers = max_workers or settings.max_workers
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda i0: _verify_slice(dual, i0, mids, smooth, rest, rest_smooth), range(n)))
        slices = list(
            pool.map(
                lambda i0: _objective_slice(dual, nodes[i0], weights[i0], rest_nodes, rest_weights),
                range(nodes.size),
            )
        )

    objective = math.fsum(slices)
    report = FeasibilityReport(
        family=dual.family,
        m=m,
        grid_points_per_axis=n,
        cells_checked=sum(p[0] for p in parts),
        cells_skipped_at_kinks=skipped,
        max_boundary_residual=_boundary_residual(dual, mids),
        max_derivative_residual=max(p[1] for p in parts),
        max_analytic_mismatch=max(p[2] for p in parts),
        derivative_violations=sum(p[3] for p in parts),
        derivative_tolerance=DERIVATIVE_TOLERANCE,
        objective_numeric=objective,
        objective_closed_form=dual.objective_closed_form(),
        objective_method=ObjectiveMethod.MIDPOINT,
        objective_tolerance=1e-3 if m <= 2 else 5e-3,
    )
    logger.info(
        "uniform dual m=%d grid=%d gap=%.2e skipped=%d ok=%s",
        m, n, report.relative_gap, skipped, report.ok,
    )
    return report


def uniform_dual_derivative_map(grid_points_per_axis: int = 50) -> list[dict[str, float]]:
    """m = 2 dual의 셀 중심별 (x1, x2, ∂z1/∂x1, ∂z2/∂x2)."""
    n = grid_points_per_axis
    mids = (np.arange(n) + 0.5) / n
    pts = _cartesian(mids, 2)
    partials = UniformDual(m=2).partials(pts)
    return [
        {"x1": float(x[0]), "x2": float(x[1]), "dz1": float(d[0]), "dz2": float(d[1])}
        for x, d in zip(pts, partials)
    ]
