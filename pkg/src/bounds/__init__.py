"""Closed-form revenue bounds and ratio curves."""

from src.bounds.closed_form import (
    ProportionalRatio,
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
from src.bounds.reports import (
    MAX_CURVE_M,
    BoundReport,
    Figure1Row,
    Figure2Row,
    SettingKind,
    bound_report_exponential,
    bound_report_uniform,
    figure_1_curve,
    figure_2_curve,
)

__all__ = [
    "uniform_upper_bound",
    "exponential_upper_bound",
    "exponential_iid_upper_bound",
    "surplus_bound_uniform",
    "surplus_bound_exponential",
    "surplus_improvement_factor",
    "ratio_separate_uniform",
    "ratio_bundle_uniform",
    "ratio_separate_exponential",
    "ratio_proportional",
    "ProportionalRatio",
    "BoundReport",
    "SettingKind",
    "bound_report_uniform",
    "bound_report_exponential",
    "Figure1Row",
    "Figure2Row",
    "MAX_CURVE_M",
    "figure_1_curve",
    "figure_2_curve",
]
