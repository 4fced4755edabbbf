"""
Teager energy of subband coefficients and the statistics built on it.

Histograms, maximum-likelihood exponential and Gaussian fits, AIC and
(symmetric) Kullback-Leibler divergence between binned distributions.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "DegenerateFitError",
    "TeagerSubband",
    "Histogram",
    "FittedPdf",
    "teager",
    "histogram",
    "fit_exponential",
    "fit_gaussian",
    "aic",
    "kl_divergence",
    "symmetric_kl",
]

KL_FLOOR = 1e-12


class DegenerateFitError(ValueError):
    """The sample cannot support the requested distribution (zero scale or variance)."""


@dataclass(frozen=True)
class TeagerSubband:
    values: np.ndarray
    source_len: int

    def __len__(self):
        return self.values.size

    def mean(self) -> float:
        return float(self.values.mean())


def teager(coeffs) -> TeagerSubband:
    """Discrete Teager energy ``W[m]**2 - W[m+1] * W[m-1]``, clamped at zero.

    The first and last samples reuse their own value as the missing
    neighbour, so constant input maps to zeros everywhere.
    """
    w = np.asarray(coeffs, dtype=float)
    if w.ndim != 1 or w.size == 0:
        raise ValueError("teager needs a non-empty 1-D coefficient vector")
    padded = np.concatenate(([w[0]], w, [w[-1]]))
    t = w * w - padded[2:] * padded[:-2]
    return TeagerSubband(np.maximum(t, 0.0), w.size)


@dataclass(frozen=True)
class Histogram:
    bin_edges: np.ndarray
    probs: np.ndarray

    @property
    def n_bins(self) -> int:
        return self.probs.size

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.bin_edges)

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.bin_edges[1:] + self.bin_edges[:-1])

    def density(self) -> np.ndarray:
        return self.probs / self.widths


def histogram(values, n_bins: int = 50, upper: float | None = None) -> Histogram:
    """Equal-width histogram of non-negative values over ``[0, max]``.

    ``upper`` overrides the top edge so that several samples can share
    bins (needed for divergences). All-zero input spans ``[0, 1]``.
    """
    v = np.asarray(values, dtype=float).ravel()
    if v.size == 0:
        raise ValueError("histogram of an empty sample")
    if n_bins < 2:
        raise ValueError("n_bins must be >= 2")
    top = float(v.max()) if upper is None else float(upper)
    if top <= 0.0:
        top = 1.0
    counts, edges = np.histogram(v, bins=n_bins, range=(0.0, top))
    total = counts.sum()
    probs = counts / total if total > 0 else np.zeros(n_bins)
    return Histogram(edges, probs)


@dataclass(frozen=True)
class FittedPdf:
    """A fitted exponential (``params = (scale,)``) or Gaussian (``(mean, var)``)."""

    family: str
    params: tuple
    log_likelihood: float
    sample_count: int

    @property
    def n_params(self) -> int:
        return {"exponential": 1, "gaussian": 2}[self.family]

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        if self.family == "exponential":
            (scale,) = self.params
            return np.where(x >= 0, np.exp(-x / scale) / scale, 0.0)
        mean, var = self.params
        return np.exp(-0.5 * (x - mean) ** 2 / var) / np.sqrt(2 * np.pi * var)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        if self.family == "exponential":
            (scale,) = self.params
            return np.where(x >= 0, -np.expm1(-np.maximum(x, 0) / scale), 0.0)
        from scipy.special import ndtr

        mean, var = self.params
        return ndtr((x - mean) / np.sqrt(var))

    def binned(self, edges) -> np.ndarray:
        """Probability mass of the fitted model in each bin."""
        return np.diff(self.cdf(np.asarray(edges, dtype=float)))


def fit_exponential(values) -> FittedPdf:
    """Maximum-likelihood exponential fit; the scale is the sample mean."""
    v = np.asarray(values, dtype=float).ravel()
    if v.size == 0:
        raise ValueError("cannot fit an empty sample")
    if np.any(v < 0):
        raise ValueError("exponential fit needs non-negative values")
    scale = float(v.mean())
    if scale <= 0.0:
        raise DegenerateFitError("all-zero sample has no exponential fit")
    loglik = -v.size * (np.log(scale) + 1.0)
    return FittedPdf("exponential", (scale,), float(loglik), v.size)


def fit_gaussian(values) -> FittedPdf:
    """Maximum-likelihood Gaussian fit (biased 1/n variance)."""
    v = np.asarray(values, dtype=float).ravel()
    if v.size < 2:
        raise ValueError("gaussian fit needs at least two values")
    mean = float(v.mean())
    var = float(np.mean((v - mean) ** 2))
    if var <= 0.0:
        raise DegenerateFitError("zero-variance sample has no gaussian fit")
    # at the MLE the quadratic term sums to n/2
    loglik = -0.5 * v.size * (np.log(2 * np.pi * var) + 1.0)
    return FittedPdf("gaussian", (mean, var), float(loglik), v.size)


def aic(fit: FittedPdf) -> float:
    """Akaike information criterion ``2k - 2 log L``; lower is a better fit."""
    return 2.0 * fit.n_params - 2.0 * fit.log_likelihood


def _probs(h):
    return h.probs if isinstance(h, Histogram) else np.asarray(h, dtype=float)


def kl_divergence(p, q) -> float:
    """``sum p_i ln(p_i / q_i)`` over bins with ``p_i > 0``.

    ``p`` and ``q`` are histograms on identical bins (or bare probability
    vectors). ``q`` is floored at 1e-12 so empty bins stay finite.
    """
    if isinstance(p, Histogram) and isinstance(q, Histogram):
        if p.bin_edges.shape != q.bin_edges.shape or not np.array_equal(p.bin_edges, q.bin_edges):
            raise ValueError("histograms have different bin edges")
    pp, qq = _probs(p), _probs(q)
    if pp.shape != qq.shape:
        raise ValueError(f"bin count mismatch: {pp.shape} vs {qq.shape}")
    mask = pp > 0
    return float(np.sum(pp[mask] * np.log(pp[mask] / np.maximum(qq[mask], KL_FLOOR))))


def symmetric_kl(p, q) -> float:
    """Average of the two KL directions."""
    return 0.5 * (kl_divergence(p, q) + kl_divergence(q, p))
