"""Neumann-Poincare spectra, polarization tensors and effective conductivities
of planar inclusions given by exterior conformal maps."""

__version__ = "0.1.0"

from .effective import EffectiveExpansion, a_functionals, effective_expansion, ngon_effective, ngon_radius
from .estimators import (
    DiluteEffectiveConductivity,
    FDMEffectiveConductivity,
    NPSpectrum,
    PolarizationTensorEstimator,
    check_contrast,
    check_map,
)
from .exceptions import NPSpecError
from .faber import faber_polynomials, grunsky_coefficients, mu_from_map
from .fdm import effective_fdm, rasterize, solve_cell
from .laurent import LaurentMap, area, boundary_sample, load, save
from .layer import HarmonicPolynomial, make_grid, single_layer_zeta, transmission_solve
from .polarization import MaterialParam, pt_extreme, pt_general
from .shapes import parse_shape
from .spectrum import adaptive_spectrum, cluster_asymptotics

__all__ = [
    "DiluteEffectiveConductivity",
    "EffectiveExpansion",
    "FDMEffectiveConductivity",
    "HarmonicPolynomial",
    "LaurentMap",
    "MaterialParam",
    "NPSpecError",
    "NPSpectrum",
    "PolarizationTensorEstimator",
    "a_functionals",
    "adaptive_spectrum",
    "area",
    "boundary_sample",
    "check_contrast",
    "check_map",
    "cluster_asymptotics",
    "effective_expansion",
    "effective_fdm",
    "faber_polynomials",
    "grunsky_coefficients",
    "load",
    "make_grid",
    "mu_from_map",
    "ngon_effective",
    "ngon_radius",
    "parse_shape",
    "pt_extreme",
    "pt_general",
    "rasterize",
    "save",
    "single_layer_zeta",
    "solve_cell",
    "transmission_solve",
]
