"""Bound reports and ratio curves."""

import logging
from enum import Enum
from multiprocessing import Pool
from typing import Sequence

import numpy as np
from pydantic import BaseModel, Field

from src.bounds.closed_form import (
    exponential_iid_upper_bound,
    exponential_upper_bound,
    ratio_bundle_uniform,
    ratio_proportional,
    ratio_separate_exponential,
    ratio_separate_uniform,
    surplus_bound_exponential,
    surplus_bound_uniform,
    surplus_improvement_factor,
    uniform_upper_bound,
)
from src.config import settings
from src.gamma import gamma_star
from src.mechanisms import brev_uniform, proportional_revenue_closed_form, srev
from src.priors import ProductPrior

logger = logging.getLogger(__name__)

MAX_CURVE_M = 200


class SettingKind(str, Enum):
    """Prior setting."""

    UNIFORM_IID = "uniform"
    EXPONENTIAL = "exp"


class BoundReport(BaseModel):
    """Setting 하나에 대한 상한/하한 요약.

    ratio_* 는 approximation ratio 자체가 아니라 그 상한이다.
    """

    setting: SettingKind = Field(description="prior setting")
    m: int = Field(ge=1, description="아이템 수")
    lambdas: list[float] | None = Field(default=None, description="exponential rate (입력 순서)")
    upper_bound: float = Field(gt=0, description="최적 수익 상한")
    surplus_bound: float = Field(gt=0, description="기대 welfare 상한")
    surplus_improvement: float | None = Field(default=None, description="welfare 상한 대비 개선 비율 (uniform)")
    srev: float = Field(gt=0, description="SRev")
    brev: float | None = Field(default=None, description="BRev (uniform, 또는 i.i.d. exponential)")
    bundle_price: float | None = Field(default=None, description="BRev 달성 가격")
    proportional_revenue: float | None = Field(default=None, description="Proportional 기대 수익 (exponential)")
    ratio_sep: float = Field(description="상한 / SRev")
    ratio_bundle: float | None = Field(default=None, description="상한 / BRev")
    ratio_proportional_mean: float | None = Field(default=None, description="Proportional 근사비 상한 (평균형)")
    ratio_proportional_max: float | None = Field(default=None, description="Proportional 근사비 상한 (최대형)")


def bound_report_uniform(m: int) -> BoundReport:
    """U[0,1]^m 보고서."""
    bundle = brev_uniform(m)
    upper = uniform_upper_bound(m)
    return BoundReport(
        setting=SettingKind.UNIFORM_IID,
        m=m,
        upper_bound=upper,
        surplus_bound=surplus_bound_uniform(m),
        surplus_improvement=surplus_improvement_factor(m),
        srev=srev(ProductPrior.uniform_iid(m)),
        brev=bundle.revenue,
        bundle_price=bundle.price,
        ratio_sep=ratio_separate_uniform(m),
        ratio_bundle=upper / bundle.revenue,
    )


def bound_report_exponential(lambdas: Sequence[float]) -> BoundReport:
    """독립 exponential 보고서.

    rate가 모두 같으면 Proportional = 가격 γ*_m/λ full bundle이 상한을 달성하므로
    BRev도 채운다.
    """
    prior = ProductPrior.exponential(list(lambdas))
    rates = prior.rates
    m = prior.m
    upper = exponential_upper_bound(rates)
    separate = srev(prior)
    prop_rev = proportional_revenue_closed_form(rates)
    prop_ratio = ratio_proportional(rates)

    iid = bool(np.all(rates == rates[0]))
    brev = exponential_iid_upper_bound(m, float(rates[0])) if iid else None
    return BoundReport(
        setting=SettingKind.EXPONENTIAL,
        m=m,
        lambdas=rates.tolist(),
        upper_bound=upper,
        surplus_bound=surplus_bound_exponential(rates),
        srev=separate,
        brev=brev,
        bundle_price=(_iid_bundle_price(m, float(rates[0])) if iid else None),
        proportional_revenue=prop_rev,
        ratio_sep=upper / separate,
        ratio_bundle=(upper / brev if brev else None),
        ratio_proportional_mean=prop_ratio.mean_form,
        ratio_proportional_max=prop_ratio.max_form,
    )


def _iid_bundle_price(m: int, rate: float) -> float:
    """i.i.d. exponential 최적 bundle 가격 γ*_m / λ."""
    return gamma_star(m) / rate


class Figure1Row(BaseModel):
    """Uniform ratio curve 한 행."""

    m: int
    ratio_sep: float
    ratio_bundle: float


class Figure2Row(BaseModel):
    """Exponential separate ratio curve 한 행."""

    m: int
    ratio_sep_exp: float


def _figure_1_row(m: int) -> Figure1Row:
    return Figure1Row(m=m, ratio_sep=ratio_separate_uniform(m), ratio_bundle=ratio_bundle_uniform(m))


def _figure_2_row(m: int) -> Figure2Row:
    return Figure2Row(m=m, ratio_sep_exp=ratio_separate_exponential(m))


def _check_max_m(max_m: int) -> None:
    if not 1 <= max_m <= MAX_CURVE_M:
        raise ValueError(f"max_m은 1..{MAX_CURVE_M} 범위여야 합니다: {max_m}")


def figure_1_curve(max_m: int = 100, max_workers: int | None = None) -> list[Figure1Row]:
    """m = 1..max_m 에서 (ratio_sep, ratio_bundle). m마다 독립이므로 process pool로 나눈다."""
    _check_max_m(max_m)
    workers = max_workers or settings.max_workers
    ms = range(1, max_m + 1)
    if workers == 1:
        rows = [_figure_1_row(m) for m in ms]
    else:
        with Pool(workers) as pool:
            rows = pool.map(_figure_1_row, ms)
    logger.info("figure 1 curve: %d rows", len(rows))
    return rows


def figure_2_curve(max_m: int = 100) -> list[Figure2Row]:
    """m = 1..max_m 에서 G(m)e/m!."""
    _check_max_m(max_m)
    return [_figure_2_row(m) for m in range(1, max_m + 1)]
