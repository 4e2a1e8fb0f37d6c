"""Incomplete gamma toolkit.

정수 m에 대해
    Γ(m,w) = (m-1)! e^{-w} Σ_{k<m} w^k / k!
    g(m,w) = Γ(m+1,w) - (m+1)Γ(m,w) = w^m e^{-w} - Γ(m,w)
    γ*_m   = g(m,·)의 유일한 양의 근, γ*_m ∈ (0, m+1)
    G(m)   = ∫ max{0, g(m,w)} dw = (γ*_m)^{m+1} e^{-γ*_m}

m > 30 이면 factorial 오버플로를 피하려고 log domain에서 계산한다.
"""

import logging
import math
from functools import lru_cache

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy import integrate
from scipy.special import gammaln, logsumexp

from src.config import settings

logger = logging.getLogger(__name__)

LOG_DOMAIN_THRESHOLD = 30
PROFILE_TOLERANCE = 1e-10
TAIL_TOLERANCE = 1e-12


class GammaProfile(BaseModel):
    """(m, γ*_m, G(m)) 묶음.

    Attributes:
        m: 아이템 수
        gamma_star: g(m,·)의 근
        G: G(m) (m > 170이면 inf일 수 있음; log 값을 사용)
        log_G: ln G(m)
        log_G_over_m_fact: ln(G(m)/m!)
    """

    model_config = ConfigDict(frozen=True)

    m: int = Field(ge=1, description="아이템 수")
    gamma_star: float = Field(gt=0, description="근 γ*_m")
    G: float = Field(ge=0, description="G(m)")
    log_G: float = Field(description="ln G(m)")
    log_G_over_m_fact: float = Field(description="ln(G(m)/m!)")

    @property
    def G_over_m_fact(self) -> float:
        return math.exp(self.log_G_over_m_fact)


def _check_args(m: int, w) -> None:
    if int(m) != m or m < 1:
        raise ValueError(f"m은 양의 정수여야 합니다: {m}")
    if np.any(np.asarray(w) < 0):
        raise ValueError("w는 0 이상이어야 합니다.")


def _safe_exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def log_upper_incomplete_gamma(m: int, w: float) -> tuple[float, int]:
    """ln Γ(m,w)와 부호 (정수 m에서 Γ > 0이므로 부호는 항상 +1).

    Returns:
        (log-value, sign)
    """
    _check_args(m, w)
    if w == 0:
        return math.lgamma(m), 1
    k = np.arange(m)
    log_terms = k * math.log(w) - gammaln(k + 1)
    return float(math.lgamma(m) - w + logsumexp(log_terms)), 1


def _finite_sum(m: int, w):
    """e^{-w} Σ_{k<m} w^k/k! (스칼라/배열)."""
    w = np.asarray(w, dtype=float)
    term = np.ones_like(w)
    total = np.ones_like(w)
    for k in range(1, m):
        term = term * w / k
        total = total + term
    return np.exp(-w) * total


def upper_incomplete_gamma(m: int, w):
    """Γ(m,w) 유한합.

    m > 30이면 log domain에서 계산 후 지수화한다 (오버플로 시 inf).
    배열 입력은 m ≤ 30에서만 지원한다.
    """
    _check_args(m, w)
    if m > LOG_DOMAIN_THRESHOLD:
        if np.ndim(w) != 0:
            return np.array([_safe_exp(log_upper_incomplete_gamma(m, float(v))[0]) for v in np.ravel(w)]).reshape(np.shape(w))
        return _safe_exp(log_upper_incomplete_gamma(m, float(w))[0])
    value = math.factorial(m - 1) * _finite_sum(m, w)
    return float(value) if np.ndim(value) == 0 else value


def _power_exp(m: int, w):
    """w^m e^{-w} (w=0이면 0)."""
    w = np.asarray(w, dtype=float)
    with np.errstate(divide="ignore"):
        out = np.where(w > 0, np.exp(m * np.log(np.where(w > 0, w, 1.0)) - w), 0.0)
    return out


def g(m: int, w):
    """g(m,w) = w^m e^{-w} - Γ(m,w) (유한합 형태)."""
    _check_args(m, w)
    out = _power_exp(m, w) - upper_incomplete_gamma(m, w)
    return float(out) if np.ndim(out) == 0 else out


def g_defining(m: int, w):
    """g(m,w) = Γ(m+1,w) - (m+1)Γ(m,w) (정의식 형태)."""
    _check_args(m, w)
    out = np.asarray(upper_incomplete_gamma(m + 1, w)) - (m + 1) * np.asarray(upper_incomplete_gamma(m, w))
    return float(out) if np.ndim(out) == 0 else out


def g_derivative(m: int, w):
    """∂g/∂w = (m+1-w) w^{m-1} e^{-w}."""
    _check_args(m, w)
    w_arr = np.asarray(w, dtype=float)
    out = (m + 1 - w_arr) * _power_exp(m - 1, w_arr)
    return float(out) if np.ndim(out) == 0 else out


def _root_sign(m: int, w: float) -> float:
    """sign(g(m,w)) 판정용 ln(w^m e^{-w}) - ln Γ(m,w)."""
    if w <= 0:
        return -math.inf
    return m * math.log(w) - w - log_upper_incomplete_gamma(m, w)[0]


@lru_cache(maxsize=None)
def gamma_star(m: int, tol: float = 1e-12) -> float:
    """g(m,·)의 근 γ*_m.

    g는 [0, m+1]에서 강증가이고 g(m,0) < 0 < g(m,m+1)이므로
    bisection이 항상 수렴한다.

    Args:
        m: 아이템 수
        tol: 상대 구간 폭

    Returns:
        γ*_m ∈ (0, m+1)
    """
    _check_args(m, 0.0)
    lo, hi = 0.0, float(m + 1)
    for _ in range(settings.bisection_max_iter):
        if hi - lo <= tol * hi:
            break
        mid = 0.5 * (lo + hi)
        if _root_sign(m, mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@lru_cache(maxsize=None)
def big_g(m: int) -> GammaProfile:
    """G(m) = (γ*)^{m+1} e^{-γ*} 와 프로파일 불변식 확인.

    Raises:
        RuntimeError: 프로파일 불변식이 깨진 경우
    """
    gs = gamma_star(m)
    log_gs = math.log(gs)
    log_G = (m + 1) * log_gs - gs
    log_G_over_m_fact = log_G - math.lgamma(m + 1)

    # G = γ*·Γ(m,γ*) 와 비교
    log_alt = log_gs + log_upper_incomplete_gamma(m, gs)[0]
    if abs(math.expm1(log_alt - log_G)) > PROFILE_TOLERANCE:
        raise RuntimeError(f"G({m}) 두 계산식 불일치: {log_G} vs {log_alt}")

    # |g(m,γ*)| / (m-1)! 는 근에서 0
    residual = abs(
        _safe_exp(m * log_gs - gs - math.lgamma(m))
        - _safe_exp(log_upper_incomplete_gamma(m, gs)[0] - math.lgamma(m))
    )
    if residual > PROFILE_TOLERANCE:
        raise RuntimeError(f"γ*_{m} 잔차 과다: {residual}")
    if not 0 < gs < m + 1:
        raise RuntimeError(f"γ*_{m} 범위 벗어남: {gs}")
    if log_G_over_m_fact >= 0:
        raise RuntimeError(f"G({m})/{m}! ≥ 1")

    logger.debug("big_g m=%d gamma*=%.12g log G=%.12g", m, gs, log_G)
    return GammaProfile(
        m=m,
        gamma_star=gs,
        G=_safe_exp(log_G),
        log_G=log_G,
        log_G_over_m_fact=log_G_over_m_fact,
    )


def g_tail_integral(m: int, a: float) -> float:
    """∫_a^∞ g(m,w) dw = a·Γ(m,a)."""
    _check_args(m, a)
    return a * upper_incomplete_gamma(m, a)


def _quad_upper_limit(m: int, a: float, scale_log: float) -> float:
    """a + 80부터 시작해 꼬리 상한 Γ(m+1,b)가 값의 1e-12 이하가 될 때까지 늘린다."""
    b = a + settings.tail_width
    while log_upper_incomplete_gamma(m + 1, b)[0] > scale_log + math.log(TAIL_TOLERANCE):
        b += settings.tail_width
    return b


def g_tail_integral_quadrature(m: int, a: float) -> float:
    """∫_a^∞ g(m,w) dw 를 적응형 구적으로 계산 (독립 검증용)."""
    _check_args(m, a)
    lg = math.lgamma(m)
    closed = g_tail_integral(m, a)
    scale_log = math.log(closed) if closed > 0 else lg
    b = _quad_upper_limit(m, a, scale_log)

    def integrand(w: float) -> float:
        # (m-1)!로 나눈 g
        return float(_safe_exp(m * math.log(w) - w - lg) if w > 0 else 0.0) - _safe_exp(
            log_upper_incomplete_gamma(m, w)[0] - lg
        )

    breaks = [p for p in (gamma_star(m), float(m), float(m + 1)) if a < p < b]
    value, _ = integrate.quad(integrand, a, b, points=breaks or None, limit=500, epsabs=0.0, epsrel=1e-11)
    return value * _safe_exp(lg)


def big_g_quadrature(m: int) -> float:
    """G(m) = ∫ max{0, g(m,w)} dw 를 구적으로 계산."""
    return g_tail_integral_quadrature(m, gamma_star(m))
