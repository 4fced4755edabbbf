"""
Subband noise tracking, SNR estimates, thresholds and shrinkage rules.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SHRINKAGE_KINDS",
    "SubbandStats",
    "ThresholdPair",
    "ShrinkageSpec",
    "NoiseTracker",
    "update_noise_estimate",
    "subband_snr",
    "exp_threshold",
    "gauss_threshold",
    "universal_threshold",
    "apply_shrinkage",
]

EPS = 1e-12
GAMMA_EPS = 1e-10
SHRINKAGE_KINDS = ("proposed_custom", "mu_law", "semisoft", "soft", "hard")


@dataclass(frozen=True)
class SubbandStats:
    """Per-subband TE powers: noisy, noise, clean estimate, and their SNR."""

    sigma_s2: np.ndarray
    sigma_n2: np.ndarray
    sigma_r2: np.ndarray
    gamma: np.ndarray


def subband_snr(sigma_s2, sigma_n2) -> SubbandStats:
    """Clean power ``max(s - n, 0)`` and SNR ``clean / max(n, 1e-12)``.

    Works elementwise on scalars or per-subband arrays.
    """
    s = np.asarray(sigma_s2, dtype=float)
    n = np.asarray(sigma_n2, dtype=float)
    r = np.maximum(s - n, 0.0)
    return SubbandStats(s, n, r, r / np.maximum(n, EPS))


def exp_threshold(sigma_n2, gamma):
    """Subband threshold under the exponential model.

    ``sqrt(sn2) * (1 + g) * ln(sqrt(1 + g)) / (sqrt(1 + g) - 1)``, written
    with ``log1p``/``expm1`` so small SNRs keep full precision. Below
    ``g = 1e-10`` the limit ``sqrt(sn2)`` is returned.
    """
    sn = np.sqrt(np.asarray(sigma_n2, dtype=float))
    g = np.asarray(gamma, dtype=float)
    half_log = 0.5 * np.log1p(np.maximum(g, 0.0))
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = (1.0 + g) * half_log / np.expm1(half_log)
    lam = sn * np.where(g > GAMMA_EPS, ratio, 1.0)
    return float(lam) if lam.ndim == 0 else lam


def gauss_threshold(sigma_n2, gamma):
    """Subband threshold under the Gaussian model:
    ``sqrt(sn2) * sqrt(2 (g + g^2)) * ln(sqrt(1 + 1/g))``. Needs ``g > 0``.
    """
    g = np.asarray(gamma, dtype=float)
    if np.any(g <= 0):
        raise ValueError("gaussian threshold is undefined for gamma <= 0")
    sn = np.sqrt(np.asarray(sigma_n2, dtype=float))
    lam = sn * np.sqrt(2.0 * (g + g * g)) * 0.5 * np.log1p(1.0 / g)
    return float(lam) if lam.ndim == 0 else lam


def universal_threshold(sigma_n2, m):
    """Donoho-Johnstone universal threshold ``sqrt(sn2) * sqrt(2 ln m)``."""
    m = np.asarray(m, dtype=float)
    if np.any(m < 1):
        raise ValueError("coefficient count must be >= 1")
    lam = np.sqrt(np.asarray(sigma_n2, dtype=float)) * np.sqrt(2.0 * np.log(m))
    return float(lam) if lam.ndim == 0 else lam


@dataclass(frozen=True)
class ThresholdPair:
    lambda1: float
    lambda2: float

    def __post_init__(self):
        if self.lambda1 < 0 or self.lambda2 < 0:
            raise ValueError("thresholds must be non-negative")

    @classmethod
    def from_lambda(cls, lambda1: float) -> "ThresholdPair":
        lambda1 = float(lambda1)
        return cls(lambda1, 2.0 * lambda1)


@dataclass(frozen=True)
class ShrinkageSpec:
    kind: str = "proposed_custom"
    alpha: float = 0.5
    mu: float = 255.0

    def __post_init__(self):
        if self.kind not in SHRINKAGE_KINDS:
            raise ValueError(f"unknown shrinkage kind {self.kind!r}; expected one of {SHRINKAGE_KINDS}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")
        if not self.mu > 0:
            raise ValueError(f"mu must be positive, got {self.mu}")


def _mu_law(a, lam1, mu):
    # lam1 * ((1 + mu)**(a / lam1) - 1) / mu
    return lam1 * np.expm1((a / lam1) * np.log1p(mu)) / mu


def apply_shrinkage(y, thr: ThresholdPair, spec: ShrinkageSpec = ShrinkageSpec()):
    """Threshold coefficients ``y`` (scalar or array) with one of the shrinkage rules.

    ``proposed_custom`` blends the semisoft and mu-law rules:

    * ``|y| < l1``: ``alpha * sgn(y) * l1 * ((1 + mu)**(|y|/l1) - 1) / mu``
    * ``|y| > l2``: ``y``
    * otherwise ``(1 - alpha) * sgn(y) * l2 * (|y| - l1) / (l2 - l1) + alpha * y``

    ``alpha = 0`` gives ``semisoft`` and ``alpha = 1`` gives ``mu_law``.
    A zero threshold leaves every rule as the identity.
    """
    y = np.asarray(y, dtype=float)
    scalar = y.ndim == 0
    y = np.atleast_1d(y)
    lam1, lam2 = float(thr.lambda1), float(thr.lambda2)
    if lam1 <= 0.0:
        out = y.copy()
        return float(out[0]) if scalar else out

    a = np.abs(y)
    s = np.sign(y)
    kind = spec.kind
    if kind == "hard":
        out = np.where(a <= lam1, 0.0, y)
    elif kind == "soft":
        out = s * np.maximum(a - lam1, 0.0)
    else:
        low = a < lam1
        high = a > lam2
        mid = ~(low | high)
        out = y.copy()
        if kind == "mu_law":
            out[low] = s[low] * _mu_law(a[low], lam1, spec.mu)
            out[~low] = y[~low]
        else:
            alpha = 0.0 if kind == "semisoft" else spec.alpha
            if lam2 <= lam1:
                raise ValueError("semisoft-type rules need lambda2 > lambda1")
            psi1 = s[mid] * lam2 * (a[mid] - lam1) / (lam2 - lam1)
            out[low] = alpha * s[low] * _mu_law(a[low], lam1, spec.mu)
            out[mid] = (1.0 - alpha) * psi1 + alpha * y[mid]
    return float(out[0]) if scalar else out


class NoiseTracker:
    """Minima-controlled recursive averaging of per-subband TE power.

    Each frame, the smoothed power ``P <- beta * P + (1 - beta) * mean(te)``
    is pushed into a window of the last ``window`` frames; the window
    minimum times ``bias`` is the noise estimate. During the first
    ``init_frames`` frames the input is assumed to be noise only and the
    running average of frame powers is returned instead.

    In ``oracle`` mode the tracker just reports the mean TE of the known
    noise component of the current frame.
    """

    def __init__(self, n_subbands: int, beta: float = 0.9, window: int = 40, bias: float = 1.5,
                 init_frames: int = 5, mode: str = "tracking"):
        if mode not in ("tracking", "oracle"):
            raise ValueError(f"unknown noise mode {mode!r}")
        if not 0.0 <= beta < 1.0:
            raise ValueError("beta must lie in [0, 1)")
        if window < 1:
            raise ValueError("window must be >= 1")
        self.n_subbands = int(n_subbands)
        self.beta = float(beta)
        self.window = int(window)
        self.bias = float(bias)
        self.init_frames = int(init_frames)
        self.mode = mode
        self.frames_seen = 0
        self.smoothed = np.zeros(self.n_subbands)
        self.minima = [deque(maxlen=self.window) for _ in range(self.n_subbands)]
        self._init_sum = np.zeros(self.n_subbands)
        self.sigma_n2 = np.zeros(self.n_subbands)

    def __repr__(self):
        return (f"NoiseTracker(n_subbands={self.n_subbands}, mode={self.mode!r}, "
                f"frames_seen={self.frames_seen})")

    @staticmethod
    def _powers(te):
        return np.array([float(np.mean(getattr(t, "values", t))) for t in te])

    def update(self, te, noise_te=None) -> np.ndarray:
        """Advance one frame; returns the noise TE power per subband."""
        if len(te) != self.n_subbands:
            raise ValueError(f"got {len(te)} subbands, tracker holds {self.n_subbands}")
        if self.mode == "oracle":
            if noise_te is None:
                raise ValueError("oracle mode needs the noise TE subbands")
            if len(noise_te) != self.n_subbands:
                raise ValueError(f"got {len(noise_te)} noise subbands, tracker holds {self.n_subbands}")
            self.frames_seen += 1
            self.sigma_n2 = self._powers(noise_te)
            return self.sigma_n2.copy()

        power = self._powers(te)
        if self.frames_seen == 0:
            self.smoothed = power.copy()
        else:
            self.smoothed = self.beta * self.smoothed + (1.0 - self.beta) * power
        for k in range(self.n_subbands):
            self.minima[k].append(self.smoothed[k])
        self.frames_seen += 1

        if self.frames_seen <= self.init_frames:
            self._init_sum += power
            self.sigma_n2 = self._init_sum / self.frames_seen
        else:
            self.sigma_n2 = self.bias * np.array([min(m) for m in self.minima])
        return self.sigma_n2.copy()


def update_noise_estimate(state: NoiseTracker, te, noise_te=None):
    """Functional wrapper: advance ``state`` and return ``(state, sigma_n2)``."""
    sigma_n2 = state.update(te, noise_te)
    return state, sigma_n2
