"""Exact combinatorial identities behind the closed-form dual objectives."""

import math
from fractions import Fraction

import numpy as np
from scipy.stats import qmc

from src.config import settings
from src.duals.schemas import IdentityCheck, SimplexMoments

QMC_MAX_M = 6


def appendix_c_identity(m: int) -> IdentityCheck:
    """Σ_{k=1}^m C(m,k) k² m^{k-1} = m(1+m²)(m+1)^{m-2} 를 정확 산술로 확인.

    m = 1이면 (m+1)^{-1} = 1/2 이므로 우변은 유리수로 계산한다.
    """
    if m < 1:
        raise ValueError(f"m은 1 이상이어야 합니다: {m}")
    lhs = sum(math.comb(m, k) * k * k * m ** (k - 1) for k in range(1, m + 1))
    rhs = Fraction(m * (1 + m * m)) * Fraction(m + 1) ** (m - 2)
    return IdentityCheck(m=m, lhs=Fraction(lhs), rhs=rhs)


def uniform_dual_objective_exact(m: int) -> Fraction:
    """부분공간별 적분을 합한 uniform dual objective (정확값).

    k개 좌표가 1/(m+1) 위에 있는 부분공간 C(m,k)개 각각이
    k² m^{k-1} / (2 (m+1)^m) 을 기여한다. 합은 m(1+m²)/(2(1+m)²).
    """
    if m < 1:
        raise ValueError(f"m은 1 이상이어야 합니다: {m}")
    total = sum(math.comb(m, k) * k * k * m ** (k - 1) for k in range(1, m + 1))
    return Fraction(total, 2 * (m + 1) ** m)


def simplex_moments(
    m: int,
    qmc_log2_points: int | None = None,
    seed: int | None = None,
) -> SimplexMoments:
    """{t ∈ [0,1]^{m-1} : Σ t ≤ 1} 의 부피 1/(m-1)! 와 ∫ t_1 = 1/m!.

    m ≤ 6이면 단위 상자 scrambled Sobol hit-count 추정을 함께 반환한다.
    """
    if m < 2:
        raise ValueError(f"m은 2 이상이어야 합니다: {m}")
    log_volume = -math.lgamma(m)
    log_moment = -math.lgamma(m + 1)
    result = dict(
        m=m,
        volume=math.exp(log_volume),
        first_moment=math.exp(log_moment),
        log_volume=log_volume,
        log_first_moment=log_moment,
    )
    if m <= QMC_MAX_M:
        log2 = qmc_log2_points or settings.qmc_log2_points
        seed = settings.default_seed if seed is None else seed
        t = qmc.Sobol(d=m - 1, scramble=True, seed=seed).random_base2(log2)
        inside = t.sum(axis=1) <= 1.0
        result.update(
            volume_estimate=float(inside.mean()),
            moment_estimate=float(np.mean(t[:, 0] * inside)),
            n_points=t.shape[0],
        )
    return SimplexMoments(**result)
