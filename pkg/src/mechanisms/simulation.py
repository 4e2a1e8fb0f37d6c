"""Monte Carlo revenue estimation and truthfulness checks."""

import logging
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, computed_field
from tqdm import tqdm

from src.config import settings
from src.mechanisms.menu import SellingMechanism
from src.priors import ProductPrior, sample, sample_chunk
from src.priors.distributions import chunk_sizes

logger = logging.getLogger(__name__)

MIN_SAMPLES = 1000
VIOLATION_TOLERANCE = 1e-12
CONVEXITY_WEIGHTS = (0.25, 0.5, 0.75)


class RevenueEstimate(BaseModel):
    """Monte Carlo 기대 수익 추정치.

    Attributes:
        mean: 표본 평균 지불액
        std_err: 표본 표준편차 / √n
        n: 표본 수
        seed: 64-bit seed
    """

    model_config = ConfigDict(frozen=True)

    mean: float = Field(description="평균 수익")
    std_err: float = Field(ge=0, description="표준오차")
    n: int = Field(ge=2, description="표본 수")
    seed: int = Field(ge=0, description="seed")

    def within(self, target: float, k: float = 3.0) -> bool:
        """|mean - target| ≤ k·std_err."""
        return abs(self.mean - target) <= k * self.std_err


class ViolatingPair(BaseModel):
    """첫 번째 IC 위반 쌍 (x에서 x'을 보고할 때 이득)."""

    x: list[float]
    reported: list[float]
    gain: float


class TruthfulnessReport(BaseModel):
    """메뉴 truthfulness 점검 결과."""

    n_pairs: int = Field(description="점검한 (x, x') 쌍 수")
    ic_violations: int = Field(default=0, description="IC 위반 수")
    ir_violations: int = Field(default=0, description="IR 위반 수")
    range_violations: list[int] = Field(default_factory=list, description="범위를 벗어난 옵션 인덱스")
    utility_mismatch: float = Field(default=0.0, description="메커니즘 효용과 메뉴 효용의 최대 차이")
    first_violation: ViolatingPair | None = Field(default=None, description="첫 위반 쌍")

    @computed_field
    @property
    def ok(self) -> bool:
        return (
            self.ic_violations == 0
            and self.ir_violations == 0
            and not self.range_violations
            and self.utility_mismatch <= VIOLATION_TOLERANCE
        )


class ConvexityReport(BaseModel):
    """u(tx+(1-t)y) ≤ t·u(x)+(1-t)·u(y) 점검 결과."""

    n_checked: int
    max_violation: float

    @computed_field
    @property
    def ok(self) -> bool:
        return self.max_violation <= VIOLATION_TOLERANCE


def _check_dimensions(mech: SellingMechanism, prior: ProductPrior) -> None:
    if mech.m != prior.m:
        raise ValueError(f"메커니즘 차원 {mech.m}과 prior 차원 {prior.m}이 다릅니다.")


def _chunk_stats(mech: SellingMechanism, prior: ProductPrior, size: int, seed: int, index: int):
    pay = mech.payments(sample_chunk(prior, size, seed, index))
    mu = float(pay.mean())
    return size, mu, float(np.sum((pay - mu) ** 2))


def _combine(a: tuple[int, float, float], b: tuple[int, float, float]) -> tuple[int, float, float]:
    """(count, mean, M2) 병합 (Chan et al. 병렬 분산)."""
    na, ma, sa = a
    nb, mb, sb = b
    n = na + nb
    delta = mb - ma
    return n, ma + delta * nb / n, sa + sb + delta * delta * na * nb / n


def simulate_revenue(
    mech: SellingMechanism,
    prior: ProductPrior,
    n: int,
    seed: int | None = None,
    chunk_size: int | None = None,
    max_workers: int | None = None,
    progress: bool = False,
) -> RevenueEstimate:
    """Monte Carlo 기대 수익 추정.

    chunk k는 (seed, k)로만 결정되고 통계량은 chunk 순서대로 병합되므로
    결과는 worker 수와 무관하다.

    Args:
        mech: 메뉴 메커니즘
        prior: product prior
        n: 표본 수 (≥ 10³)
        seed: 64-bit seed (기본: settings.default_seed)
        chunk_size: chunk 크기
        max_workers: thread 수
        progress: tqdm 진행 표시

    Returns:
        RevenueEstimate
    """
    if n < MIN_SAMPLES:
        raise ValueError(f"n은 {MIN_SAMPLES} 이상이어야 합니다: {n}")
    _check_dimensions(mech, prior)
    seed = settings.default_seed if seed is None else seed
    sizes = chunk_sizes(n, chunk_size or settings.chunk_size)
    workers = max_workers or settings.max_workers

    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_chunk_stats, mech, prior, s, seed, k) for k, s in enumerate(sizes)]
        stats = None
        for fut in tqdm(futures, desc="simulate", disable=not progress):
            part = fut.result()
            stats = part if stats is None else _combine(stats, part)

    count, mu, m2 = stats
    std_err = math.sqrt(m2 / (count - 1)) / math.sqrt(count)
    logger.info("simulate %s n=%d seed=%d mean=%.8f se=%.2e", mech.label, count, seed, mu, std_err)
    return RevenueEstimate(mean=mu, std_err=std_err, n=count, seed=seed)


def check_truthful(
    mech: SellingMechanism,
    prior: ProductPrior,
    n_points: int,
    seed: int | None = None,
) -> TruthfulnessReport:
    """표본 (x, x') 쌍에서 IC/IR과 할당 범위를 점검한다.

    메뉴 메커니즘은 구조적으로 IC이므로 회귀 방지용 점검이다.
    """
    _check_dimensions(mech, prior)
    seed = settings.default_seed if seed is None else seed
    menu = mech.to_menu()

    range_violations = [
        i
        for i, o in enumerate(menu.options)
        if not math.isfinite(o.price) or o.price < 0 or any(not 0.0 <= a <= 1.0 for a in o.allocation)
    ]

    draws = sample(prior, 2 * n_points, seed)
    x, reported = draws[:n_points], draws[n_points:]
    table = menu.option_utilities(x)
    truthful = table.max(axis=1)
    misreport = table[np.arange(n_points), menu.choose(reported)]
    gain = misreport - truthful

    ic_mask = gain > VIOLATION_TOLERANCE
    first = None
    if ic_mask.any():
        i = int(np.argmax(ic_mask))
        first = ViolatingPair(x=x[i].tolist(), reported=reported[i].tolist(), gain=float(gain[i]))

    report = TruthfulnessReport(
        n_pairs=n_points,
        ic_violations=int(ic_mask.sum()),
        ir_violations=int(np.sum(truthful < -VIOLATION_TOLERANCE)),
        range_violations=range_violations,
        utility_mismatch=float(np.max(np.abs(mech.utility(x) - truthful))),
        first_violation=first,
    )
    if not report.ok:
        logger.warning("truthfulness check failed for %s: %s", mech.label, report.model_dump(exclude={"first_violation"}))
    return report


def check_convexity(
    mech: SellingMechanism,
    prior: ProductPrior,
    n_pairs: int,
    seed: int | None = None,
) -> ConvexityReport:
    """t ∈ {0.25, 0.5, 0.75}에서 유도 효용의 convexity 점검."""
    _check_dimensions(mech, prior)
    seed = settings.default_seed if seed is None else seed
    draws = sample(prior, 2 * n_pairs, seed)
    x, y = draws[:n_pairs], draws[n_pairs:]
    ux, uy = mech.utility(x), mech.utility(y)

    worst = -math.inf
    for t in CONVEXITY_WEIGHTS:
        mixed = mech.utility(t * x + (1 - t) * y)
        worst = max(worst, float(np.max(mixed - (t * ux + (1 - t) * uy))))
    return ConvexityReport(n_checked=n_pairs * len(CONVEXITY_WEIGHTS), max_violation=max(worst, 0.0))
