"""Valuation priors.

단일 factor(uniform on [0,1], exponential(λ))와 이들의 product prior.
혼합 family product는 거부한다.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.config import settings

logger = logging.getLogger(__name__)

_SEED_LIMIT = 1 << 64


class PriorKind(str, Enum):
    """Prior family."""

    UNIFORM = "uniform"
    EXPONENTIAL = "exponential"


class Prior(BaseModel):
    """단일 아이템 가치 분포.

    Attributes:
        kind: 분포 family
        rate: exponential의 λ (uniform이면 None)
    """

    model_config = ConfigDict(frozen=True)

    kind: PriorKind = Field(description="분포 family")
    rate: float | None = Field(default=None, description="exponential rate λ > 0")

    @model_validator(mode="after")
    def _check_rate(self) -> "Prior":
        if self.kind is PriorKind.EXPONENTIAL:
            if self.rate is None or not math.isfinite(self.rate) or self.rate <= 0:
                raise ValueError(f"exponential rate는 양수여야 합니다: {self.rate}")
        elif self.rate is not None:
            raise ValueError("uniform prior에는 rate를 지정할 수 없습니다.")
        return self

    @classmethod
    def uniform(cls) -> "Prior":
        return cls(kind=PriorKind.UNIFORM)

    @classmethod
    def exponential(cls, rate: float) -> "Prior":
        return cls(kind=PriorKind.EXPONENTIAL, rate=rate)

    @property
    def support(self) -> tuple[float, float]:
        if self.kind is PriorKind.UNIFORM:
            return (0.0, 1.0)
        return (0.0, math.inf)


class ProductPrior(BaseModel):
    """독립 factor들의 product prior F = F_1 × ... × F_m."""

    model_config = ConfigDict(frozen=True)

    factors: tuple[Prior, ...] = Field(min_length=1, description="factor 목록 (순서 유지)")

    @model_validator(mode="after")
    def _check_family(self) -> "ProductPrior":
        kinds = {f.kind for f in self.factors}
        if len(kinds) > 1:
            raise ValueError("uniform과 exponential factor를 섞을 수 없습니다.")
        return self

    @classmethod
    def uniform_iid(cls, m: int) -> "ProductPrior":
        if m < 1:
            raise ValueError(f"m은 1 이상이어야 합니다: {m}")
        return cls(factors=tuple(Prior.uniform() for _ in range(m)))

    @classmethod
    def exponential(cls, rates: list[float] | tuple[float, ...]) -> "ProductPrior":
        return cls(factors=tuple(Prior.exponential(r) for r in rates))

    @property
    def m(self) -> int:
        return len(self.factors)

    @property
    def kind(self) -> PriorKind:
        return self.factors[0].kind

    @property
    def rates(self) -> np.ndarray:
        """exponential rate 벡터 (uniform이면 빈 배열이 아니라 ValueError)."""
        if self.kind is not PriorKind.EXPONENTIAL:
            raise ValueError("uniform prior에는 rate가 없습니다.")
        return np.array([f.rate for f in self.factors], dtype=float)


def cdf(prior: Prior, x):
    """CDF F(x). 지지집합 밖은 0/1로 clamp.

    Args:
        prior: 단일 factor
        x: 스칼라 또는 배열

    Returns:
        x와 같은 shape의 확률
    """
    arr = np.asarray(x, dtype=float)
    if prior.kind is PriorKind.UNIFORM:
        out = np.clip(arr, 0.0, 1.0)
    else:
        out = -np.expm1(-prior.rate * np.maximum(arr, 0.0))
    return float(out) if out.ndim == 0 else out


def density(prior: Prior, x):
    """밀도 f(x)."""
    arr = np.asarray(x, dtype=float)
    if prior.kind is PriorKind.UNIFORM:
        out = ((arr >= 0.0) & (arr <= 1.0)).astype(float)
    else:
        out = np.where(arr >= 0.0, prior.rate * np.exp(-prior.rate * np.maximum(arr, 0.0)), 0.0)
    return float(out) if out.ndim == 0 else out


def inverse_cdf(prior: Prior, q):
    """분위수 F^{-1}(q), q ∈ [0, 1]."""
    arr = np.asarray(q, dtype=float)
    if np.any((arr < 0.0) | (arr > 1.0)):
        raise ValueError("q는 [0, 1] 범위여야 합니다.")
    if prior.kind is PriorKind.UNIFORM:
        out = arr.copy()
    else:
        with np.errstate(divide="ignore"):
            out = -np.log1p(-arr) / prior.rate
    return float(out) if out.ndim == 0 else out


def mean(prior: Prior) -> float:
    if prior.kind is PriorKind.UNIFORM:
        return 0.5
    return 1.0 / prior.rate


def _check_seed(seed: int) -> int:
    if not 0 <= seed < _SEED_LIMIT:
        raise ValueError(f"seed는 64-bit 부호 없는 정수여야 합니다: {seed}")
    return int(seed)


def chunk_generator(seed: int, chunk_index: int) -> np.random.Generator:
    """(seed, chunk index)로 key를 정하는 counter-based Philox generator."""
    key = (int(chunk_index) << 64) | _check_seed(seed)
    return np.random.Generator(np.random.Philox(key=key))


def sample_chunk(prior: ProductPrior, size: int, seed: int, chunk_index: int) -> np.ndarray:
    """단일 chunk 샘플링.

    uniform은 직접 추출, exponential은 역CDF −ln(1−U)/λ.

    Returns:
        (size, m) 행렬
    """
    gen = chunk_generator(seed, chunk_index)
    u = gen.random((size, prior.m))
    if prior.kind is PriorKind.UNIFORM:
        return u
    return -np.log1p(-u) / prior.rates


def chunk_sizes(n: int, chunk_size: int) -> list[int]:
    """n개 샘플을 chunk_size 단위로 나눈 크기 목록 (마지막은 나머지)."""
    full, rest = divmod(n, chunk_size)
    return [chunk_size] * full + ([rest] if rest else [])


def sample(
    prior: ProductPrior,
    n: int,
    seed: int,
    chunk_size: int | None = None,
    max_workers: int | None = None,
) -> np.ndarray:
    """n개의 가치 벡터 샘플링.

    chunk k는 항상 (seed, k)로 생성되므로 결과는 worker 수와 무관하다.

    Args:
        prior: product prior
        n: 샘플 수 (≥ 1)
        seed: 64-bit seed
        chunk_size: chunk 크기 (기본: settings.chunk_size)
        max_workers: thread 수 (기본: settings.max_workers)

    Returns:
        (n, m) 행렬
    """
    if n < 1:
        raise ValueError(f"n은 1 이상이어야 합니다: {n}")
    _check_seed(seed)
    chunk_size = chunk_size or settings.chunk_size
    sizes = chunk_sizes(n, chunk_size)
    workers = max_workers or settings.max_workers

    if len(sizes) == 1 or workers == 1:
        parts = [sample_chunk(prior, s, seed, k) for k, s in enumerate(sizes)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda ks: sample_chunk(prior, ks[1], seed, ks[0]), enumerate(sizes)))

    logger.debug("sampled n=%d m=%d in %d chunks", n, prior.m, len(sizes))
    return np.concatenate(parts, axis=0)
