"""Closed-form revenue upper bounds and approximation-ratio bounds.

모든 ratio는 분자에 최적 수익 대신 상한을 쓰므로
"approximation ratio의 상한"이다.
"""

import math
from typing import NamedTuple, Sequence

import numpy as np

from src.gamma import big_g
from src.mechanisms import brev_uniform


class ProportionalRatio(NamedTuple):
    """Proportional 근사비 상한 (평균형, 최대형)과 내림차순 정렬 순열."""

    mean_form: float
    max_form: float
    permutation: tuple[int, ...]


def _check_m(m: int) -> int:
    if int(m) != m or m < 1:
        raise ValueError(f"m은 양의 정수여야 합니다: {m}")
    return int(m)


def _check_rates(lambdas: Sequence[float]) -> np.ndarray:
    rates = np.asarray(lambdas, dtype=float)
    if rates.ndim != 1 or rates.size == 0:
        raise ValueError("rate 목록이 비어 있습니다.")
    if np.any(~np.isfinite(rates)) or np.any(rates <= 0):
        raise ValueError(f"rate는 양수여야 합니다: {list(lambdas)}")
    return rates


def uniform_upper_bound(m: int) -> float:
    """U[0,1] i.i.d. m개 아이템 최적 수익 상한 m(1+m²)/(2(1+m)²)."""
    m = _check_m(m)
    return m * (1 + m * m) / (2 * (1 + m) ** 2)


def surplus_bound_uniform(m: int) -> float:
    """자명한 welfare 상한 m/2."""
    return _check_m(m) / 2


def surplus_improvement_factor(m: int) -> float:
    """welfare 상한 대비 개선 비율 (m+1)²/(m²+1) ≥ 1."""
    m = _check_m(m)
    return (m + 1) ** 2 / (m * m + 1)


def exponential_upper_bound(lambdas: Sequence[float]) -> float:
    """독립 exponential 아이템 최적 수익 상한 G(m)/m! · Σ 1/λ_j."""
    rates = _check_rates(lambdas)
    profile = big_g(rates.size)
    return math.exp(profile.log_G_over_m_fact) * math.fsum(1.0 / rates)


def exponential_iid_upper_bound(m: int, rate: float) -> float:
    """i.i.d. 형태 G(m) / ((m-1)! λ)."""
    m = _check_m(m)
    _check_rates([rate])
    return math.exp(big_g(m).log_G - math.lgamma(m) - math.log(rate))


def surplus_bound_exponential(lambdas: Sequence[float]) -> float:
    """기대 welfare Σ 1/λ_j."""
    return math.fsum(1.0 / _check_rates(lambdas))


def ratio_separate_uniform(m: int) -> float:
    """상한 / SRev = 2(1+m²)/(1+m)² < 2."""
    m = _check_m(m)
    return 2 * (1 + m * m) / (1 + m) ** 2


def ratio_bundle_uniform(m: int, precision: int | None = None) -> float:
    """상한 / BRev (uniform)."""
    return uniform_upper_bound(m) / brev_uniform(_check_m(m), precision).revenue


def ratio_separate_exponential(m: int) -> float:
    """상한 / SRev = G(m)·e/m! < e (rate와 무관)."""
    return math.exp(big_g(_check_m(m)).log_G_over_m_fact + 1.0)


def ratio_proportional(lambdas: Sequence[float]) -> ProportionalRatio:
    """Proportional 근사비 상한.

    평균형 (1/m)(1 + λ_1/λ_2 + ... + λ_1/λ_m) 과 최대형 λ_1/λ_m.
    입력은 내부에서 내림차순으로 정렬되고 순열이 함께 반환된다.
    """
    rates = _check_rates(lambdas)
    order = np.argsort(-rates, kind="stable")
    ordered = rates[order]
    ratios = ordered[0] / ordered
    return ProportionalRatio(
        mean_form=math.fsum(ratios) / rates.size,
        max_form=float(ratios[-1]),
        permutation=tuple(int(i) for i in order),
    )
