"""
End-to-end enhancement: frame, decompose, estimate, threshold, resynthesize.

Per frame the wavelet packet coefficients are Teager-operated, the mean
TE per subband gives the noisy power, a noise tracker gives the noise
power, and from these a per-subband threshold is derived and applied to
the raw coefficients before the inverse transform. Frames are joined by
overlap-add.
"""
from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from functools import lru_cache

import numpy as np

from .framing import AudioBuffer, frame_signal, overlap_add
from .pwpt import PerceptualTree, build_perceptual_tree, load_tree, pwpt_forward, pwpt_inverse
from .stats import teager
from .thresholding import (
    NoiseTracker,
    ShrinkageSpec,
    ThresholdPair,
    apply_shrinkage,
    exp_threshold,
    gauss_threshold,
    subband_snr,
    universal_threshold,
)

__all__ = [
    "EnhanceConfig",
    "FrameResult",
    "make_tracker",
    "te_power",
    "subband_thresholds",
    "enhance_frame",
    "enhance_signal",
]

THRESHOLD_RULES = ("exponential", "gaussian", "universal")
THRESHOLD_MAPPINGS = ("sqrt", "direct")
POWER_CONVENTIONS = ("squared", "mean")


@dataclass(frozen=True)
class EnhanceConfig:
    """All tunables of the enhancement pipeline.

    ``tree_file`` (if set) replaces the greedy tree built from
    ``max_depth``/``target_bands``.
    """

    frame_len: int = 512
    hop: int = 256
    sample_rate: int = 8000
    max_depth: int = 6
    target_bands: int = 24
    tree_file: str | None = None
    shrinkage: str = "proposed_custom"
    alpha: float = 0.5
    mu: float = 255.0
    threshold_rule: str = "exponential"
    threshold_mapping: str = "sqrt"
    power_convention: str = "squared"
    noise_mode: str = "tracking"
    histogram_bins: int = 50
    tracker_beta: float = 0.9
    tracker_window: int = 40
    tracker_bias: float = 1.5
    tracker_init_frames: int = 5

    def __post_init__(self):
        if self.threshold_rule not in THRESHOLD_RULES:
            raise ValueError(f"threshold_rule must be one of {THRESHOLD_RULES}")
        if self.threshold_mapping not in THRESHOLD_MAPPINGS:
            raise ValueError(f"threshold_mapping must be one of {THRESHOLD_MAPPINGS}")
        if self.power_convention not in POWER_CONVENTIONS:
            raise ValueError(f"power_convention must be one of {POWER_CONVENTIONS}")
        if self.noise_mode not in ("tracking", "oracle"):
            raise ValueError("noise_mode must be 'tracking' or 'oracle'")
        if not 0 < self.hop <= self.frame_len:
            raise ValueError("need 0 < hop <= frame_len")
        if self.tree_file is None and self.frame_len % (2 ** self.max_depth):
            raise ValueError(f"frame_len {self.frame_len} not divisible by 2**{self.max_depth}")
        ShrinkageSpec(self.shrinkage, self.alpha, self.mu)

    @property
    def spec(self) -> ShrinkageSpec:
        return ShrinkageSpec(self.shrinkage, self.alpha, self.mu)

    @property
    def tree(self) -> PerceptualTree:
        return _tree_for(self.sample_rate, self.max_depth, self.target_bands, self.tree_file)

    def replace(self, **changes) -> "EnhanceConfig":
        return replace(self, **changes)

    @classmethod
    def field_types(cls) -> dict:
        return {f.name: f.type for f in fields(cls)}


@lru_cache(maxsize=16)
def _tree_for(sample_rate, max_depth, target_bands, tree_file):
    if tree_file:
        tree = load_tree(tree_file)
        if tree.sample_rate != sample_rate:
            raise ValueError(f"tree file is for {tree.sample_rate} Hz, config says {sample_rate} Hz")
        return tree
    return build_perceptual_tree(sample_rate, max_depth, target_bands)


@dataclass
class FrameResult:
    frame: np.ndarray
    sigma_s2: np.ndarray
    sigma_n2: np.ndarray
    gamma: np.ndarray
    lambda1: np.ndarray
    energy_in: np.ndarray = field(repr=False)
    energy_out: np.ndarray = field(repr=False)


def make_tracker(cfg: EnhanceConfig) -> NoiseTracker:
    return NoiseTracker(len(cfg.tree), beta=cfg.tracker_beta, window=cfg.tracker_window,
                        bias=cfg.tracker_bias, init_frames=cfg.tracker_init_frames, mode=cfg.noise_mode)


def te_power(level, cfg: EnhanceConfig):
    """Power entering the threshold formulas for a mean TE level.

    With the default ``squared`` convention the exponential scale (the
    mean TE) is the square root of the power, so the power is the squared
    mean and thresholds come out in TE units. ``mean`` uses the mean TE
    itself as the power.
    """
    level = np.asarray(level, dtype=float)
    return level * level if cfg.power_convention == "squared" else level


def subband_thresholds(te_noisy, te_noise, lengths, cfg: EnhanceConfig):
    """First threshold per subband, already mapped to coefficient amplitude.

    ``te_noisy`` and ``te_noise`` are per-subband mean TE levels of the
    noisy frame and of the noise. Returns ``(stats, lambda1)``.
    """
    stats = subband_snr(te_power(te_noisy, cfg), te_power(te_noise, cfg))
    if cfg.threshold_rule == "exponential":
        lam = exp_threshold(stats.sigma_n2, stats.gamma)
    elif cfg.threshold_rule == "gaussian":
        # gamma -> 0 limit of the gaussian rule is 0
        pos = stats.gamma > 0
        lam = np.zeros_like(stats.gamma)
        if pos.any():
            lam[pos] = gauss_threshold(stats.sigma_n2[pos], stats.gamma[pos])
    else:
        lam = universal_threshold(stats.sigma_n2, np.asarray(lengths))
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    if cfg.threshold_mapping == "sqrt":
        lam = np.sqrt(lam)
    return stats, lam


def enhance_frame(windowed_frame, tracker: NoiseTracker, cfg: EnhanceConfig = EnhanceConfig(),
                  noise_frame=None, details: bool = False):
    """Enhance one windowed frame; returns ``(frame, tracker)``.

    ``noise_frame`` is the windowed noise component of the same frame,
    required when the tracker runs in oracle mode. With ``details=True``
    a :class:`FrameResult` replaces the bare frame.
    """
    x = np.asarray(windowed_frame, dtype=float)
    if x.size != cfg.frame_len:
        raise ValueError(f"frame has {x.size} samples, config expects {cfg.frame_len}")
    tree = cfg.tree
    sub = pwpt_forward(x, tree)
    te = [teager(c) for c in sub.coeffs]
    noise_te = None
    if noise_frame is not None:
        noise_te = [teager(c) for c in pwpt_forward(np.asarray(noise_frame, dtype=float), tree).coeffs]
    level_n = tracker.update(te, noise_te)
    level_s = np.array([t.mean() for t in te])

    stats, lam1 = subband_thresholds(level_s, level_n, sub.lengths, cfg)
    spec = cfg.spec
    shrunk = sub.map(lambda k, c: apply_shrinkage(c, ThresholdPair.from_lambda(lam1[k]), spec))
    out = pwpt_inverse(shrunk)
    if not details:
        return out, tracker
    return FrameResult(out, stats.sigma_s2, stats.sigma_n2, stats.gamma, lam1,
                       sub.energy(), shrunk.energy()), tracker


def enhance_signal(noisy, noise_ref=None, cfg: EnhanceConfig = EnhanceConfig(), details: bool = False):
    """Enhance a whole signal frame by frame.

    ``noise_ref`` (the exact additive noise) is required in oracle mode.
    Returns an AudioBuffer of the input's length, or
    ``(AudioBuffer, [FrameResult, ...])`` with ``details=True``.
    """
    if not isinstance(noisy, AudioBuffer):
        noisy = AudioBuffer(noisy, cfg.sample_rate)
    if noisy.sample_rate != cfg.sample_rate:
        cfg = cfg.replace(sample_rate=noisy.sample_rate)
    if cfg.noise_mode == "oracle":
        if noise_ref is None:
            raise ValueError("oracle noise mode needs the noise reference")
        ref = noise_ref.samples if isinstance(noise_ref, AudioBuffer) else np.asarray(noise_ref, dtype=float)
        if ref.shape != noisy.samples.shape:
            raise ValueError("noise reference must match the noisy signal's length")
        if isinstance(noise_ref, AudioBuffer) and noise_ref.sample_rate != noisy.sample_rate:
            raise ValueError("noise reference sample rate differs from the noisy signal")
        noise_frames = frame_signal(ref, cfg.frame_len, cfg.hop).frames
    else:
        noise_frames = None

    frames = frame_signal(noisy, cfg.frame_len, cfg.hop)
    tracker = make_tracker(cfg)
    out = np.empty_like(frames.frames)
    results = []
    for i, frame in enumerate(frames.frames):
        nf = None if noise_frames is None else noise_frames[i]
        res, tracker = enhance_frame(frame, tracker, cfg, nf, details=details)
        if details:
            results.append(res)
            out[i] = res.frame
        else:
            out[i] = res
    enhanced = overlap_add(frames.with_frames(out), len(noisy), noisy.sample_rate)
    return (enhanced, results) if details else enhanced
