"""Posted-price revenue: Myerson single-item pricing, SRev, BRev for uniform items."""

import logging
import math
from functools import lru_cache
from typing import Callable, NamedTuple

import numpy as np

from src.config import settings
from src.priors import IrwinHall, Prior, PriorKind, ProductPrior, irwin_hall_cdf_grid, irwin_hall_sf

logger = logging.getLogger(__name__)

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
MYERSON_TOLERANCE = 1e-10
SCAN_BRACKET = 2


class PostedPrice(NamedTuple):
    """(가격, 기대 수익) 쌍."""

    price: float
    revenue: float


def golden_section_max(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    xtol: float = 1e-10,
    max_iter: int = 200,
) -> PostedPrice:
    """구간 [lo, hi]에서 unimodal 함수 f의 최대점을 golden-section으로 찾는다.

    Returns:
        (argmax, max) - 탐색 중 평가한 점 중 최댓값
    """
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    best = max((fc, c), (fd, d))
    for _ in range(max_iter):
        if b - a <= xtol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
            best = max(best, (fc, c))
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
            best = max(best, (fd, d))
    return PostedPrice(price=best[1], revenue=best[0])


def _posted_price_objective(prior: Prior) -> Callable[[float], float]:
    if prior.kind is PriorKind.UNIFORM:
        return lambda p: p * (1.0 - min(max(p, 0.0), 1.0))
    return lambda p: p * math.exp(-prior.rate * p)


def myerson_price(prior: Prior, verify: bool = True) -> PostedPrice:
    """단일 아이템 최적 가격 argmax_p p(1 - F(p)).

    uniform [0,1]: (1/2, 1/4), exponential(λ): (1/λ, 1/(λe)).
    verify=True이면 golden-section 최대화 값과 1e-10 이내인지 확인한다.

    Raises:
        RuntimeError: 폐형식과 수치 최대화가 어긋날 때
    """
    if prior.kind is PriorKind.UNIFORM:
        closed = PostedPrice(price=0.5, revenue=0.25)
        upper = 1.0
    else:
        closed = PostedPrice(price=1.0 / prior.rate, revenue=1.0 / (prior.rate * math.e))
        upper = 10.0 / prior.rate

    if verify:
        numeric = golden_section_max(_posted_price_objective(prior), 0.0, upper, xtol=1e-9 * upper)
        if abs(numeric.revenue - closed.revenue) > MYERSON_TOLERANCE:
            raise RuntimeError(f"Myerson 폐형식 검증 실패: {closed} vs {numeric}")
    return closed


def srev(prior: ProductPrior) -> float:
    """아이템별 Myerson 수익의 합 SRev."""
    return math.fsum(myerson_price(f).revenue for f in prior.factors)


def _bundle_objective(ih: IrwinHall) -> Callable[[float], float]:
    return lambda x: x * irwin_hall_sf(ih, x)


@lru_cache(maxsize=256)
def brev_uniform(
    m: int,
    precision: int | None = None,
    scan_points: int | None = None,
) -> PostedPrice:
    """Uniform i.i.d. 아이템 full bundle 최적 가격 sup_{x∈[0,m]} x(1 - F_S(x)).

    10³점 스캔으로 최대 셀을 찾고 인접 구간에서 golden-section으로 정밀화한다.
    스캔은 FFT 근사 CDF(irwin_hall_cdf_grid)로 한 번에 계산하고,
    정밀화와 최종 값은 인증된 mpmath 교대합으로 계산한다.

    Raises:
        PrecisionInsufficientError: Irwin-Hall 정밀도 부족
    """
    if m < 1:
        raise ValueError(f"m은 1 이상이어야 합니다: {m}")
    ih = IrwinHall(m=m, precision=precision or settings.precision_bits)
    n = scan_points or settings.scan_points
    f = _bundle_objective(ih)

    grid = np.linspace(0.0, float(m), n + 1)
    values = grid * (1.0 - irwin_hall_cdf_grid(m, grid))
    i = int(np.argmax(values))
    # 근사 오차로 최대 셀이 한 칸 밀릴 수 있어 양쪽 두 칸을 포함
    lo = float(grid[max(i - SCAN_BRACKET, 0)])
    hi = float(grid[min(i + SCAN_BRACKET, n)])
    refined = golden_section_max(f, lo, hi, xtol=1e-10 * m)
    at_scan = f(float(grid[i]))
    if refined.revenue < at_scan:
        refined = PostedPrice(price=float(grid[i]), revenue=at_scan)

    logger.debug("brev_uniform m=%d price=%.10g revenue=%.10g", m, refined.price, refined.revenue)
    return refined
