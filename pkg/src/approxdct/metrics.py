"""Matrix-proximity, transform-coding and image-quality measures."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import integrate

from .errors import DegenerateError, DimensionError, DomainError
from .transforms import ExactDct, TransformSpec, exact_dct, orthogonal_matrix

PEAK = 255.0
UQI_WINDOW = 8


@dataclass(frozen=True)
class MarkovModel:
    """First-order Markov source, covariance ``rho**|i-j|``."""

    rho: float = 0.95
    size: int = 8

    def __post_init__(self):
        if not -1.0 < self.rho < 1.0:
            raise DomainError(f"correlation {self.rho} must lie in (-1, 1)")

    @cached_property
    def R(self) -> np.ndarray:
        idx = np.arange(self.size)
        r = self.rho ** np.abs(idx[:, None] - idx[None, :]).astype(float)
        r.setflags(write=False)
        return r


@dataclass(frozen=True)
class MetricsReport:
    epsilon: float
    mse: float
    cg: float
    eta: float


@dataclass(frozen=True)
class RowTransferFunction:
    """Frequency response ``H(w) = sum_n t[n] exp(-j n w)`` of one matrix row."""

    coefficients: np.ndarray

    def __call__(self, omega):
        n = np.arange(len(self.coefficients))
        return np.exp(-1j * np.multiply.outer(omega, n)) @ np.asarray(self.coefficients, dtype=float)

    def power(self, omega):
        return np.abs(self(omega)) ** 2


def transform_matrix(t) -> np.ndarray:
    """Orthonormal 8x8 matrix for a spec, the exact DCT, or a raw array."""
    if isinstance(t, TransformSpec):
        return orthogonal_matrix(t)
    if isinstance(t, ExactDct):
        return t.C
    return np.asarray(t, dtype=float)


def _covariance(model) -> np.ndarray:
    if model is None:
        return MarkovModel().R
    if isinstance(model, MarkovModel):
        return model.R
    return np.asarray(model, dtype=float)


def _check_pair(approx, exact):
    approx = np.asarray(approx, dtype=float)
    exact = np.asarray(exact, dtype=float)
    if approx.shape != (8, 8) or exact.shape != (8, 8):
        raise DimensionError("total error energy needs two 8x8 matrices")
    if not (np.all(np.isfinite(approx)) and np.all(np.isfinite(exact))):
        raise DomainError("non-finite matrix entry")
    return approx, exact


def total_error_energy(approx, exact=None) -> float:
    """Total error energy between an approximation and the exact DCT.

    Integrating ``|H_m(w; C - C_hat)|**2`` over ``[0, pi]`` and summing over
    rows reduces to ``pi * ||C - C_hat||_F**2`` because the cross terms
    integrate ``cos(k w)`` over whole half-periods.  The closed form is
    returned; :func:`total_error_energy_quad` integrates numerically.
    """
    approx, exact = _check_pair(transform_matrix(approx), exact_dct().C if exact is None else transform_matrix(exact))
    return math.pi * float(np.sum((exact - approx) ** 2))


def total_error_energy_quad(approx, exact=None, epsabs: float = 1e-10) -> float:
    """Same quantity as :func:`total_error_energy`, by adaptive quadrature."""
    approx, exact = _check_pair(transform_matrix(approx), exact_dct().C if exact is None else transform_matrix(exact))
    diff = exact - approx
    total = 0.0
    for row in diff:
        h = RowTransferFunction(row)
        value, _ = integrate.quad(lambda w: float(h.power(w)), 0.0, math.pi, epsabs=epsabs, epsrel=1e-12, limit=200)
        total += value
    return total


def mse_markov(approx, model: MarkovModel | None = None) -> float:
    """Mean-square error ``trace((C - C_hat) R (C - C_hat)^T) / 8`` against the exact DCT."""
    e = exact_dct().C - transform_matrix(approx)
    R = _covariance(model)
    return float(np.trace(e @ R @ e.T)) / e.shape[0]


def _coefficient_covariance(approx, model):
    c = transform_matrix(approx)
    return c, c @ _covariance(model) @ c.T


def coding_gain(approx, model: MarkovModel | None = None) -> float:
    """Unified coding gain in dB.

    ``10 log10 prod_k (1 / (A_k B_k))**(1/N)`` with ``A_k`` the k-th
    coefficient variance and ``B_k`` the squared norm of the k-th synthesis
    basis vector (column k of the inverse).
    """
    c, S = _coefficient_covariance(approx, model)
    A = np.diag(S)
    if np.any(A <= 0):
        raise DegenerateError("non-positive coefficient variance")
    B = np.sum(np.linalg.inv(c) ** 2, axis=0)
    return float(-10.0 * np.mean(np.log10(A * B)))


def transform_efficiency(approx, model: MarkovModel | None = None) -> float:
    """Percentage of ``|C_hat R C_hat^T|`` mass on the diagonal."""
    _, S = _coefficient_covariance(approx, model)
    a = np.abs(S)
    return float(100.0 * np.trace(a) / np.sum(a))


def evaluate(approx, model: MarkovModel | None = None) -> MetricsReport:
    return MetricsReport(
        epsilon=total_error_energy(approx),
        mse=mse_markov(approx, model),
        cg=coding_gain(approx, model),
        eta=transform_efficiency(approx, model),
    )


# -- image quality ---------------------------------------------------------


def _plane(img) -> np.ndarray:
    return np.asarray(getattr(img, "samples", img))


def psnr(reference, test) -> float:
    """Peak signal-to-noise ratio for 8-bit images; ``math.inf`` if identical."""
    a, b = _plane(reference), _plane(test)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    err = np.mean((a.astype(float) - b.astype(float)) ** 2)
    if err == 0:
        return math.inf
    return float(10.0 * np.log10(PEAK**2 / err))


def _box_sums(x, w):
    """Sums over every ``w x w`` window (valid positions only)."""
    s = np.zeros((x.shape[0] + 1, x.shape[1] + 1), dtype=x.dtype)
    s[1:, 1:] = x.cumsum(0).cumsum(1)
    return s[w:, w:] - s[:-w, w:] - s[w:, :-w] + s[:-w, :-w]


def uqi_map(reference, test, window: int = UQI_WINDOW) -> np.ndarray:
    """Per-window universal quality index, stride 1.

    Degenerate windows follow the usual convention: both variances and both
    means zero gives 1; zero variances alone give the luminance term
    ``2 mx my / (mx^2 + my^2)``; zero means alone give the
    contrast-structure term ``2 sxy / (sx^2 + sy^2)``.
    """
    x, y = _plane(reference), _plane(test)
    if x.shape != y.shape:
        raise DimensionError(f"shape mismatch {x.shape} vs {y.shape}")
    if x.ndim != 2 or min(x.shape) < window:
        raise DimensionError(f"images must be 2-D and at least {window}x{window}")
    # Integer pixels give exact window statistics (and exact degeneracy tests).
    exact = np.issubdtype(x.dtype, np.integer) and np.issubdtype(y.dtype, np.integer)
    dt = np.int64 if exact else float
    x, y = x.astype(dt), y.astype(dt)
    n = window * window
    sx, sy = _box_sums(x, window), _box_sums(y, window)
    sxx, syy, sxy = _box_sums(x * x, window), _box_sums(y * y, window), _box_sums(x * y, window)
    # All quantities scaled by n**2 (means) or n*(n-1) (variances); the ratios cancel.
    var_sum = (n * (sxx + syy) - sx * sx - sy * sy).astype(float)
    cov = (n * sxy - sx * sy).astype(float)
    mean_sq = (sx * sx + sy * sy).astype(float)
    mean_prod = (sx * sy).astype(float)

    q = np.ones(var_sum.shape)
    full = (var_sum != 0) & (mean_sq != 0)
    lum = (var_sum == 0) & (mean_sq != 0)
    cs = (var_sum != 0) & (mean_sq == 0)
    q[full] = 4 * cov[full] * mean_prod[full] / (var_sum[full] * mean_sq[full])
    q[lum] = 2 * mean_prod[lum] / mean_sq[lum]
    q[cs] = 2 * cov[cs] / var_sum[cs]
    return q


def uqi(reference, test, window: int = UQI_WINDOW) -> float:
    """Universal quality index, the mean of :func:`uqi_map`."""
    return float(np.mean(uqi_map(reference, test, window)))
