"""Irwin-Hall distribution (sum of m i.i.d. U[0,1]).

F_S(x) = (1/m!) Σ_{k=0}^{⌊x⌋} (-1)^k C(m,k) (x-k)^m

교대합은 x ≈ m/2 근처에서 상쇄가 심하므로 mpmath 확장 정밀도로 계산하고,
반올림 오차 상한으로 상대오차 1e-9를 보장하지 못하면 예외를 던진다.
x > m/2 구간은 대칭 F_S(x) = 1 - F_S(m - x)로 항 수를 줄인다.
"""

import math

import mpmath
import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy import fft as sp_fft

from src.config import settings
from src.errors import PrecisionInsufficientError

RELATIVE_TOLERANCE = 1e-9


class IrwinHall(BaseModel):
    """Irwin-Hall 분포.

    Attributes:
        m: 합산되는 uniform 개수
        precision: 교대합 작업 정밀도 (bits)
    """

    model_config = ConfigDict(frozen=True)

    m: int = Field(ge=1, description="summand 개수")
    precision: int = Field(
        default_factory=lambda: settings.precision_bits,
        ge=53,
        description="작업 정밀도 (bits)",
    )


def _lower_tail(m: int, x: float, prec: int) -> mpmath.mpf:
    """0 ≤ x ≤ m/2 에서 F_S(x)를 mpf로 반환 (prec 정밀도 컨텍스트 안에서 호출)."""
    if x <= 0.0:
        return mpmath.mpf(0)
    xm = mpmath.mpf(x)
    terms = []
    for k in range(int(math.floor(x)) + 1):
        t = math.comb(m, k) * (xm - k) ** m
        terms.append(-t if k % 2 else t)
    total = mpmath.fsum(terms)

    # pow는 항마다 O(m) ulp, 합산은 항 수만큼 ulp 오차
    magnitude = mpmath.fsum(abs(t) for t in terms)
    error_bound = (2 * m + len(terms)) * magnitude * mpmath.ldexp(1, -prec)
    if total <= 0 or error_bound > RELATIVE_TOLERANCE * total:
        raise PrecisionInsufficientError(
            f"Irwin-Hall m={m}, x={x}: {prec} bits로 상대오차 {RELATIVE_TOLERANCE:g} 보장 불가"
        )
    return total / mpmath.factorial(m)


def irwin_hall_cdf(ih: IrwinHall, x: float) -> float:
    """Irwin-Hall CDF F_S(x). 구간 밖은 0/1로 clamp.

    Raises:
        PrecisionInsufficientError: 설정 정밀도로 1e-9를 보장할 수 없을 때
    """
    m = ih.m
    if x <= 0.0:
        return 0.0
    if x >= m:
        return 1.0
    with mpmath.workprec(ih.precision):
        if x <= m / 2:
            value = _lower_tail(m, x, ih.precision)
        else:
            value = 1 - _lower_tail(m, m - x, ih.precision)
        return float(value)


def irwin_hall_sf(ih: IrwinHall, x: float) -> float:
    """생존함수 1 - F_S(x) = F_S(m - x)."""
    m = ih.m
    if x <= 0.0:
        return 1.0
    if x >= m:
        return 0.0
    with mpmath.workprec(ih.precision):
        if x >= m / 2:
            value = _lower_tail(m, m - x, ih.precision)
        else:
            value = 1 - _lower_tail(m, x, ih.precision)
        return float(value)


SCAN_RESOLUTION = 1000


def irwin_hall_cdf_grid(m: int, x: np.ndarray, resolution: int = SCAN_RESOLUTION) -> np.ndarray:
    """여러 점의 F_S(x) float64 근사 (오차 O(m/resolution²)).

    U[0,1]을 resolution개 셀 질량으로 나누고 FFT 거듭제곱으로 m겹 합성곱을 만든 뒤,
    각 질량을 셀 폭에 고르게 펼친 piecewise-linear CDF를 보간한다.
    인증된 값이 아니므로 최대점 구간 탐색 같은 위치 찾기에만 쓴다.
    """
    if m < 1:
        raise ValueError(f"m은 1 이상이어야 합니다: {m}")
    n = resolution
    size = m * (n - 1) + 1
    fft_size = sp_fft.next_fast_len(size, real=True)
    cell = np.full(n, 1.0 / n)
    masses = sp_fft.irfft(sp_fft.rfft(cell, fft_size) ** m, fft_size)[:size]
    cumulative = np.cumsum(np.clip(masses, 0.0, None))
    cumulative /= cumulative[-1]
    # 인덱스 s의 질량은 [(s + m/2 - 1/2)/n, (s + m/2 + 1/2)/n] 에 퍼져 있다
    right_edges = (np.arange(size) + m / 2 + 0.5) / n
    edges = np.concatenate(([right_edges[0] - 1.0 / n], right_edges))
    values = np.concatenate(([0.0], cumulative))
    return np.interp(np.asarray(x, dtype=float), edges, values, left=0.0, right=1.0)
