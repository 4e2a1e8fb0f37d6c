"""Selling mechanisms and revenue estimation."""

from src.mechanisms.catalog import (
    full_bundle,
    proportional,
    proportional_revenue_closed_form,
    separate_myerson,
    separate_pricing,
)
from src.mechanisms.menu import Mechanism, MenuOption, SellingMechanism, SeparateMechanism
from src.mechanisms.pricing import PostedPrice, brev_uniform, golden_section_max, myerson_price, srev
from src.mechanisms.simulation import (
    ConvexityReport,
    RevenueEstimate,
    TruthfulnessReport,
    ViolatingPair,
    check_convexity,
    check_truthful,
    simulate_revenue,
)

__all__ = [
    "MenuOption",
    "Mechanism",
    "SellingMechanism",
    "SeparateMechanism",
    "PostedPrice",
    "golden_section_max",
    "myerson_price",
    "srev",
    "brev_uniform",
    "separate_pricing",
    "separate_myerson",
    "full_bundle",
    "proportional",
    "proportional_revenue_closed_form",
    "RevenueEstimate",
    "TruthfulnessReport",
    "ConvexityReport",
    "ViolatingPair",
    "simulate_revenue",
    "check_truthful",
    "check_convexity",
]
