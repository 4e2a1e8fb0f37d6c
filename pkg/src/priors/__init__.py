"""Valuation priors package."""

from .distributions import (
    Prior,
    PriorKind,
    ProductPrior,
    cdf,
    density,
    inverse_cdf,
    mean,
    sample,
    sample_chunk,
)
from .irwin_hall import IrwinHall, irwin_hall_cdf, irwin_hall_cdf_grid, irwin_hall_sf

__all__ = [
    "Prior",
    "PriorKind",
    "ProductPrior",
    "cdf",
    "density",
    "inverse_cdf",
    "mean",
    "sample",
    "sample_chunk",
    "IrwinHall",
    "irwin_hall_cdf",
    "irwin_hall_cdf_grid",
    "irwin_hall_sf",
]
