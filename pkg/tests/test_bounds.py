import math
from fractions import Fraction

import pytest
from hypothesis import given, settings as hsettings, strategies as st

from src.bounds import (
    SettingKind,
    bound_report_exponential,
    bound_report_uniform,
    exponential_iid_upper_bound,
    exponential_upper_bound,
    figure_1_curve,
    figure_2_curve,
    ratio_bundle_uniform,
    ratio_proportional,
    ratio_separate_exponential,
    ratio_separate_uniform,
    surplus_bound_uniform,
    surplus_improvement_factor,
    uniform_upper_bound,
)

rates = st.lists(st.floats(min_value=0.1, max_value=10.0), min_size=1, max_size=6)


@pytest.mark.parametrize("m", [1, 2, 3, 10, 100])
def test_uniform_upper_bound_formula(m):
    exact = Fraction(m * (1 + m * m), 2 * (1 + m) ** 2)
    assert uniform_upper_bound(m) == pytest.approx(float(exact), abs=1e-12)


def test_uniform_spot_values():
    assert uniform_upper_bound(1) == pytest.approx(0.25, abs=1e-12)
    assert uniform_upper_bound(2) == pytest.approx(5 / 9, abs=1e-12)
    assert uniform_upper_bound(3) == pytest.approx(0.9375, abs=1e-12)


def test_uniform_bound_below_surplus():
    for m in range(1, 60):
        assert uniform_upper_bound(m) < surplus_bound_uniform(m)
        assert surplus_improvement_factor(m) == pytest.approx(surplus_bound_uniform(m) / uniform_upper_bound(m))


def test_exponential_upper_bound_values():
    assert exponential_upper_bound([1.0]) == pytest.approx(math.exp(-1), abs=1e-12)
    assert exponential_upper_bound([2.0, 1.0]) == pytest.approx(0.62997, abs=1e-5)
    assert exponential_iid_upper_bound(2, 1.0) == pytest.approx(exponential_upper_bound([1.0, 1.0]), rel=1e-12)


@hsettings(max_examples=50, deadline=None)
@given(lambdas=rates, c=st.floats(min_value=0.1, max_value=10.0))
def test_exponential_bound_homogeneous_and_symmetric(lambdas, c):
    base = exponential_upper_bound(lambdas)
    assert exponential_upper_bound([c * r for r in lambdas]) == pytest.approx(base / c, rel=1e-10)
    assert exponential_upper_bound(list(reversed(lambdas))) == pytest.approx(base, rel=1e-12)


def test_exponential_bound_rejects_bad_rates():
    with pytest.raises(ValueError):
        exponential_upper_bound([])
    with pytest.raises(ValueError):
        exponential_upper_bound([1.0, -2.0])


def test_ratio_anchors():
    assert ratio_separate_uniform(2) == pytest.approx(10 / 9, abs=1e-12)
    assert ratio_separate_exponential(2) == pytest.approx(1.14163, abs=2e-5)
    assert ratio_separate_exponential(3) == pytest.approx(1.24235, abs=2e-3)
    assert ratio_bundle_uniform(2) == pytest.approx(1.0206, abs=1e-4)


def test_proportional_ratio_equal_rates_is_one():
    ratio = ratio_proportional([1.5, 1.5, 1.5])
    assert ratio.mean_form == pytest.approx(1.0, rel=1e-12)
    assert ratio.max_form >= ratio.mean_form - 1e-12


def test_bound_report_uniform_two():
    report = bound_report_uniform(2)
    assert report.setting is SettingKind.UNIFORM_IID
    assert report.upper_bound == pytest.approx(5 / 9)
    assert report.srev == pytest.approx(0.5)
    assert report.brev == pytest.approx((2 / 3) ** 1.5, abs=1e-9)
    assert report.bundle_price == pytest.approx(math.sqrt(2 / 3), abs=1e-8)


def test_bound_report_exponential():
    report = bound_report_exponential([2.0, 1.0])
    assert report.srev == pytest.approx(0.551819, abs=1e-6)
    assert report.brev is None
    assert report.proportional_revenue == pytest.approx(0.41998, abs=1e-5)

    iid = bound_report_exponential([1.0, 1.0])
    assert iid.brev == pytest.approx(iid.upper_bound, rel=1e-12)
    assert iid.bundle_price == pytest.approx((1 + math.sqrt(5)) / 2, abs=1e-10)


def test_figure_curves():
    rows = figure_1_curve(6, max_workers=1)
    assert [r.m for r in rows] == list(range(1, 7))
    assert all(r.ratio_bundle <= r.ratio_sep + 1e-9 for r in rows)
    curve = figure_2_curve(3)
    assert curve[1].ratio_sep_exp == pytest.approx(1.14163, abs=2e-5)


def test_figure_curve_limit():
    with pytest.raises(ValueError):
        figure_2_curve(201)


def test_ratio_separate_uniform_increasing_below_two():
    values = [ratio_separate_uniform(m) for m in range(1, 1001)]
    assert values[0] == pytest.approx(1.0)
    assert all(b > a for a, b in zip(values, values[1:]))
    assert max(values) < 2.0


def test_ratio_separate_exponential_increasing_below_e():
    values = [ratio_separate_exponential(m) for m in range(1, 101)]
    assert values[0] == pytest.approx(1.0, abs=1e-12)
    assert all(b > a for a, b in zip(values, values[1:]))
    assert max(values) < math.e
