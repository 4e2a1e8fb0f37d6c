import math

import numpy as np
import pytest
from pydantic import ValidationError

from src.gamma import big_g, gamma_star
from src.mechanisms import (
    Mechanism,
    MenuOption,
    brev_uniform,
    check_convexity,
    check_truthful,
    full_bundle,
    myerson_price,
    proportional,
    proportional_revenue_closed_form,
    separate_myerson,
    simulate_revenue,
    srev,
)
from src.priors import IrwinHall, Prior, ProductPrior, irwin_hall_sf


def test_myerson_uniform_and_exponential():
    assert myerson_price(Prior.uniform()) == (0.5, 0.25)
    price, revenue = myerson_price(Prior.exponential(2.0))
    assert price == pytest.approx(0.5)
    assert revenue == pytest.approx(1 / (2 * math.e))


def test_srev_sums_items():
    assert srev(ProductPrior.uniform_iid(3)) == pytest.approx(0.75)
    assert srev(ProductPrior.exponential([2.0, 1.0])) == pytest.approx(0.551819, abs=1e-6)


def test_brev_uniform_two_items():
    best = brev_uniform(2)
    assert best.price == pytest.approx(math.sqrt(2 / 3), abs=1e-8)
    assert best.revenue == pytest.approx((2 / 3) ** 1.5, abs=1e-10)


def test_brev_uniform_three_items():
    best = brev_uniform(3)
    assert best.price == pytest.approx(1.166, abs=2e-3)
    assert best.revenue == pytest.approx(0.8606, abs=1e-4)


@pytest.mark.parametrize("m", [5, 17, 60])
def test_brev_uniform_beats_certified_scan(m):
    ih = IrwinHall(m=m)
    grid = np.linspace(0.0, m, 201)
    scan = max(float(x) * irwin_hall_sf(ih, float(x)) for x in grid)
    best = brev_uniform(m)
    assert best.revenue >= scan - 1e-12
    assert best.revenue == pytest.approx(best.price * irwin_hall_sf(ih, best.price), abs=1e-15)
    assert best.revenue >= m / 4


def test_proportional_menu():
    mech = proportional([2.0, 1.0])
    option = mech.options[-1]
    assert option.price == pytest.approx(gamma_star(2) / 2)
    assert option.price == pytest.approx(0.809017, abs=1e-6)
    assert option.allocation == pytest.approx((1.0, 0.5))
    assert mech.permutation == (0, 1)
    assert proportional([1.0, 2.0]).permutation == (1, 0)
    assert proportional_revenue_closed_form([2.0, 1.0]) == pytest.approx(0.41998, abs=1e-5)


def test_proportional_equal_rates_is_bundle():
    mech = proportional([1.0, 1.0, 1.0])
    assert mech.options[-1].allocation == (1.0, 1.0, 1.0)


def test_null_option_inserted_first():
    mech = full_bundle(2, 1.0)
    assert len(mech.options) == 2
    assert mech.options[0].is_null


def test_allocation_out_of_range_rejected():
    with pytest.raises(ValidationError):
        MenuOption(allocation=(1.5, 0.0), price=1.0)
    with pytest.raises(ValidationError):
        MenuOption(allocation=(0.5,), price=-1.0)


def test_corrupted_allocation_reported_as_range_violation():
    # 검증을 거치지 않은 옵션으로 잘못된 메뉴를 만든다
    corrupted = MenuOption.model_construct(allocation=(1.2, 0.5), price=1.0)
    mech = Mechanism(options=(corrupted,))
    report = check_truthful(mech, ProductPrior.uniform_iid(2), 1000, seed=5)
    assert report.range_violations == [1]
    assert report.ok is False


def test_single_option_menu_is_truthful():
    mech = full_bundle(3, 1.2)
    report = check_truthful(mech, ProductPrior.uniform_iid(3), 2000, seed=5)
    assert report.ok
    assert report.ir_violations == 0


def test_menu_choice_prefers_cheaper_on_ties():
    mech = Mechanism(options=(MenuOption(allocation=(1.0,), price=0.5),))
    alloc, pay = mech.outcome(np.array([[0.5]]))
    assert pay[0] == 0.0
    assert alloc[0, 0] == 0.0


def test_simulation_matches_closed_form():
    prior = ProductPrior.uniform_iid(1)
    estimate = simulate_revenue(separate_myerson(prior), prior, 200_000, seed=7)
    assert estimate.within(0.25, k=4.0)

    prior = ProductPrior.exponential([2.0, 1.0])
    estimate = simulate_revenue(proportional([2.0, 1.0]), prior, 200_000, seed=7)
    assert estimate.within(proportional_revenue_closed_form([2.0, 1.0]), k=4.0)


def test_simulation_independent_of_workers():
    prior = ProductPrior.exponential([1.0, 1.0])
    mech = full_bundle(2, gamma_star(2))
    one = simulate_revenue(mech, prior, 50_000, seed=11, chunk_size=8192, max_workers=1)
    four = simulate_revenue(mech, prior, 50_000, seed=11, chunk_size=8192, max_workers=4)
    assert one == four


def test_simulation_rejects_small_n_and_mismatch():
    prior = ProductPrior.uniform_iid(2)
    with pytest.raises(ValueError):
        simulate_revenue(full_bundle(2, 1.0), prior, 999)
    with pytest.raises(ValueError):
        simulate_revenue(full_bundle(3, 1.0), prior, 10_000)


@pytest.mark.parametrize(
    "mech, prior",
    [
        (proportional([2.0, 1.0]), ProductPrior.exponential([2.0, 1.0])),
        (separate_myerson(ProductPrior.uniform_iid(3)), ProductPrior.uniform_iid(3)),
        (full_bundle(2, math.sqrt(2 / 3)), ProductPrior.uniform_iid(2)),
    ],
)
def test_menus_are_truthful_and_convex(mech, prior):
    report = check_truthful(mech, prior, 5000, seed=3)
    assert report.ok
    assert report.ic_violations == 0
    assert check_convexity(mech, prior, 2000, seed=3).ok


PROPORTIONAL_RATES = [(1.0,), (2.0, 1.0), (1.0, 1.0, 1.0), (4.0, 2.0, 1.0)]


@pytest.mark.parametrize("lambdas", PROPORTIONAL_RATES)
def test_proportional_simulation_converges(lambdas):
    prior = ProductPrior.exponential(lambdas)
    estimate = simulate_revenue(proportional(lambdas), prior, 200_000, seed=13)
    assert estimate.within(proportional_revenue_closed_form(lambdas), k=4.0)


def test_full_bundle_at_gamma_star_three_exponential_items():
    prior = ProductPrior.exponential([1.0, 1.0, 1.0])
    estimate = simulate_revenue(full_bundle(3, gamma_star(3)), prior, 200_000, seed=17)
    assert estimate.within(big_g(3).G / 2, k=4.0)
    assert big_g(3).G / 2 == pytest.approx(1.3711, abs=1e-4)


@pytest.mark.slow
@pytest.mark.parametrize("lambdas", PROPORTIONAL_RATES)
def test_proportional_simulation_ten_million(lambdas):
    prior = ProductPrior.exponential(lambdas)
    estimate = simulate_revenue(proportional(lambdas), prior, 10_000_000, seed=1)
    assert estimate.within(proportional_revenue_closed_form(lambdas))


@pytest.mark.slow
def test_full_bundle_three_exponential_items_ten_million():
    prior = ProductPrior.exponential([1.0, 1.0, 1.0])
    estimate = simulate_revenue(full_bundle(3, gamma_star(3)), prior, 10_000_000, seed=1)
    assert estimate.within(big_g(3).G / 2)
