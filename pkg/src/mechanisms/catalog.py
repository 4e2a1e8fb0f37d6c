"""Concrete mechanisms: separate pricing, full bundle, Proportional lottery."""

import math
from typing import Sequence

import numpy as np

from src.gamma import big_g, gamma_star
from src.mechanisms.menu import Mechanism, MenuOption, SeparateMechanism
from src.mechanisms.pricing import myerson_price
from src.priors import ProductPrior


def _check_rates(lambdas: Sequence[float]) -> np.ndarray:
    rates = np.asarray(lambdas, dtype=float)
    if rates.ndim != 1 or rates.size == 0:
        raise ValueError("rate 목록이 비어 있습니다.")
    if np.any(~np.isfinite(rates)) or np.any(rates <= 0):
        raise ValueError(f"rate는 양수여야 합니다: {list(lambdas)}")
    return rates


def separate_pricing(prices: Sequence[float], label: str = "separate") -> SeparateMechanism:
    """아이템별 take-it-or-leave-it 가격."""
    return SeparateMechanism(item_prices=tuple(float(p) for p in prices), label=label)


def separate_myerson(prior: ProductPrior) -> SeparateMechanism:
    """각 아이템을 Myerson 가격에 따로 판매 (수익 = SRev)."""
    return separate_pricing([myerson_price(f).price for f in prior.factors], label="separate-myerson")


def full_bundle(m: int, price: float) -> Mechanism:
    """모든 아이템을 하나의 묶음으로 price에 판매."""
    if m < 1:
        raise ValueError(f"m은 1 이상이어야 합니다: {m}")
    option = MenuOption(allocation=(1.0,) * m, price=price)
    return Mechanism(options=(option,), label="full-bundle")


def proportional(lambdas: Sequence[float]) -> Mechanism:
    """Proportional 메커니즘.

    아이템 j를 확률 λ_j/λ_1로 팔고 총 γ*_m/λ_1을 받는다 (λ_1 = max rate).
    입력 순서는 유지하고, 내림차순 정렬 순열을 permutation에 기록한다.
    rate가 모두 같으면 가격 γ*_m/λ의 결정적 full bundle이 된다.

    Args:
        lambdas: exponential rate 목록 (임의 순서)

    Returns:
        {null, (λ_j/λ_1)_j @ γ*_m/λ_1} 2-옵션 메뉴
    """
    rates = _check_rates(lambdas)
    order = np.argsort(-rates, kind="stable")
    lam1 = float(rates[order[0]])
    allocation = tuple(float(r / lam1) for r in rates)
    price = gamma_star(rates.size) / lam1
    return Mechanism(
        options=(MenuOption(allocation=allocation, price=price),),
        label="proportional",
        permutation=tuple(int(i) for i in order),
    )


def proportional_revenue_closed_form(lambdas: Sequence[float]) -> float:
    """Proportional 기대 수익 G(m) / ((m-1)! λ_1) (log domain)."""
    rates = _check_rates(lambdas)
    m = rates.size
    profile = big_g(m)
    return math.exp(profile.log_G - math.lgamma(m) - math.log(float(rates.max())))
