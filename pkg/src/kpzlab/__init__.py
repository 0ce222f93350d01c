"""Deterministic pseudo-spectral laboratory for the renormalized KPZ equation."""

__version__ = "0.1.0"

from .grid import (
    GridSpec,
    SpectralField,
    apply_multiplier,
    derivative,
    heat_semigroup,
    make_grid,
    pointwise_product,
)
from .mollifier import Mollifier, eta2_convolve, mollify

__all__ = [
    "GridSpec",
    "SpectralField",
    "make_grid",
    "apply_multiplier",
    "heat_semigroup",
    "derivative",
    "pointwise_product",
    "Mollifier",
    "mollify",
    "eta2_convolve",
    "__version__",
]
