"""Estimator-style wrappers around the library functions.

A shape plays the role of a sample: ``fit`` takes one shape, ``transform``
takes a list of shapes, ``predict`` takes volume-fraction parameters.
"""
from __future__ import annotations

import os

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .effective import effective_expansion
from .exceptions import ParameterError
from .fdm import effective_fdm, rasterize
from .laurent import LaurentMap, from_dict, load, validate
from .polarization import MaterialParam, pt_extreme, pt_general
from .shapes import parse_polygon, parse_shape
from .spectrum import adaptive_spectrum


def check_map(shape, validate_map: bool = False) -> LaurentMap:
    """Coerce a map, a JSON-like dict, a file path or a ``generator:args`` string."""
    if isinstance(shape, LaurentMap):
        m = shape
    elif isinstance(shape, dict):
        m = from_dict(shape)
    elif isinstance(shape, (str, os.PathLike)):
        s = os.fspath(shape)
        m = load(s) if os.path.isfile(s) else parse_shape(s)
    else:
        raise ParameterError(f"cannot interpret {type(shape).__name__} as a shape")
    return validate(m) if validate_map else m


def check_contrast(k) -> MaterialParam:
    """Parse ``0``, ``inf`` or a positive float (strings accepted)."""
    if isinstance(k, MaterialParam):
        return k
    if isinstance(k, str):
        k = k.strip().lower()
        k = np.inf if k in ("inf", "infinity") else k
    try:
        k = float(k)
    except (TypeError, ValueError) as exc:
        raise ParameterError(f"invalid contrast {k!r}") from exc
    return MaterialParam(k)


def check_shapes(X) -> list:
    """A single shape or a sequence of shapes, as a list."""
    if isinstance(X, (list, tuple)):
        if not X:
            raise ParameterError("empty shape sequence")
        return list(X)
    return [X]


def check_rho(rho) -> np.ndarray:
    rho = np.atleast_1d(np.asarray(rho, dtype=float))
    if rho.ndim != 1 or np.any(~np.isfinite(rho)) or np.any(rho <= 0):
        raise ParameterError("rho must be a 1-d array of positive numbers")
    return rho


class NPSpectrum(TransformerMixin, BaseEstimator):
    """Leading positive NP eigenvalues by the adaptive finite-section protocol."""

    def __init__(self, kmax=30, threshold=1e-5, max_step=16, window=5, step_size=100):
        self.kmax = kmax
        self.threshold = threshold
        self.max_step = max_step
        self.window = window
        self.step_size = step_size

    def _run(self, shape):
        return adaptive_spectrum(
            check_map(shape),
            self.kmax,
            step_size=self.step_size,
            max_step=self.max_step,
            window=self.window,
            threshold=self.threshold,
        )

    def fit(self, X, y=None):
        """Run the protocol on one shape, or on the first of a sequence."""
        res = self._run(check_shapes(X)[0])
        self.result_ = res
        self.eigenvalues_ = res.lambdas
        self.steps_used_ = res.steps_used
        return self

    def transform(self, X):
        check_is_fitted(self)
        return np.array([self._run(s).lambdas for s in check_shapes(X)])


class PolarizationTensorEstimator(TransformerMixin, BaseEstimator):
    """Polarization tensor; closed form for ``k`` in ``{0, inf}``, finite section otherwise."""

    def __init__(self, k="inf", n=None):
        self.k = k
        self.n = n

    def _tensor(self, shape):
        m = check_map(shape)
        mat = check_contrast(self.k)
        if mat.k == 0 or np.isinf(mat.k):
            return pt_extreme(m, mat.sign).m
        return pt_general(m, mat, n=self.n).m

    def fit(self, X, y=None):
        self.tensor_ = self._tensor(check_shapes(X)[0])
        return self

    def transform(self, X):
        check_is_fitted(self)
        return np.array([self._tensor(s) for s in check_shapes(X)])

    def predict(self, X):
        """Far-field perturbation ``-(1/2 pi) grad H . M x / |x|^2`` for ``H = x_1``."""
        check_is_fitted(self)
        x = np.asarray(X, dtype=float).reshape(-1, 2)
        return -(x @ self.tensor_[0]) / (2 * np.pi * (x**2).sum(axis=1))


class DiluteEffectiveConductivity(BaseEstimator):
    """Dilute expansion of the effective conductivity for extreme contrasts."""

    def __init__(self, k="inf", order=4):
        self.k = k
        self.order = order

    def fit(self, X, y=None):
        mat = check_contrast(self.k)
        if not (mat.k == 0 or np.isinf(mat.k)):
            raise ParameterError("the dilute expansion is implemented for k = 0 or k = inf")
        self.expansion_ = effective_expansion(check_map(X), mat.sign)
        return self

    def predict(self, rho):
        check_is_fitted(self)
        return self.expansion_.sigma(check_rho(rho), order=self.order)


class FDMEffectiveConductivity(BaseEstimator):
    """Finite-volume effective conductivity of the rasterized periodic cell."""

    def __init__(self, k=0.0, gridN=256):
        self.k = k
        self.gridN = gridN

    def fit(self, X, y=None):
        """``X``: a shape, or polygon vertices; polygonal generators rasterize exactly."""
        poly = parse_polygon(X) if isinstance(X, str) and not os.path.isfile(X) else None
        if poly is not None:
            self.shape_ = poly
        elif isinstance(X, (LaurentMap, str, dict, os.PathLike)):
            self.shape_ = check_map(X)
        else:
            self.shape_ = np.asarray(X, dtype=complex)
        self.contrast_ = check_contrast(self.k).k
        return self

    def predict(self, rho):
        check_is_fitted(self)
        out = [effective_fdm(rasterize(self.shape_, r, self.gridN, self.contrast_)).sigma_star for r in check_rho(rho)]
        return np.array(out)
