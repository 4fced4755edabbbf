"""
Frame segmentation and overlap-add reconstruction.

Signals are cut into windowed frames with a periodic Hamming window. At
50% overlap the periodic Hamming window sums to the constant 1.08, so
reconstruction only has to divide the overlap-added frames by the summed
window. Edge samples covered by a single frame are divided by the window
sum actually present there, which keeps the round trip exact at both ends.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "AudioBuffer",
    "FrameSequence",
    "make_window",
    "frame_signal",
    "overlap_add",
    "window_sum",
]


@dataclass(frozen=True)
class AudioBuffer:
    """Mono sample sequence with its sample rate in Hz."""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim != 1:
            raise ValueError("AudioBuffer holds mono audio only (1-D samples)")
        if int(self.sample_rate) <= 0:
            raise ValueError(f"sample_rate must be positive, got {self.sample_rate}")
        if not np.all(np.isfinite(samples)):
            raise ValueError("samples contain NaN or Inf")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "sample_rate", int(self.sample_rate))

    def __len__(self):
        return self.samples.size

    @property
    def duration(self) -> float:
        return self.samples.size / self.sample_rate


@dataclass
class FrameSequence:
    """Windowed analysis frames stacked row-wise, shape (n_frames, frame_len)."""

    frames: np.ndarray
    frame_len: int
    hop: int
    window: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.frames = np.atleast_2d(np.asarray(self.frames, dtype=float))
        self.window = np.asarray(self.window, dtype=float)
        if not 0 < self.hop <= self.frame_len:
            raise ValueError(f"need 0 < hop <= frame_len, got hop={self.hop}, frame_len={self.frame_len}")
        if self.frames.shape[1] != self.frame_len:
            raise ValueError(f"frames have length {self.frames.shape[1]}, expected {self.frame_len}")
        if self.window.shape != (self.frame_len,):
            raise ValueError("window length must equal frame_len")

    def __len__(self):
        return self.frames.shape[0]

    def with_frames(self, frames) -> "FrameSequence":
        """Same geometry, new frame contents (e.g. after processing)."""
        return FrameSequence(np.asarray(frames, dtype=float), self.frame_len, self.hop, self.window)


def make_window(frame_len: int) -> np.ndarray:
    """Periodic Hamming window ``0.54 - 0.46 cos(2 pi n / frame_len)``.

    Unlike the symmetric variant, copies shifted by ``frame_len // 2`` add
    up to exactly 1.08 at every sample.
    """
    if frame_len < 2:
        raise ValueError(f"frame_len must be >= 2, got {frame_len}")
    n = np.arange(frame_len)
    return 0.54 - 0.46 * np.cos(2.0 * np.pi * n / frame_len)


def _resolve_window(window, frame_len):
    if window is None or (isinstance(window, str) and window == "hamming"):
        return make_window(frame_len)
    if isinstance(window, str):
        if window in ("rect", "rectangular", "boxcar"):
            return np.ones(frame_len)
        raise ValueError(f"unknown window {window!r}")
    window = np.asarray(window, dtype=float)
    if window.shape != (frame_len,):
        raise ValueError("window length must equal frame_len")
    return window


def frame_signal(buf, frame_len: int, hop: int, window=None) -> FrameSequence:
    """Cut a signal into overlapping windowed frames.

    Frame ``i`` covers samples ``[i*hop, i*hop + frame_len)``; the tail is
    zero padded so that ``ceil(len / hop)`` frames are produced.

    Parameters
    ----------
    buf : AudioBuffer or array_like
        Input signal.
    frame_len, hop : int
        Frame geometry in samples, ``0 < hop <= frame_len``.
    window : None, str or array_like, optional
        ``None``/``"hamming"`` for the periodic Hamming window, ``"rect"``
        for no tapering, or explicit weights.
    """
    x = buf.samples if isinstance(buf, AudioBuffer) else np.asarray(buf, dtype=float)
    if x.ndim != 1:
        raise ValueError("expected a 1-D signal")
    if x.size == 0:
        raise ValueError("cannot frame an empty signal")
    if not 0 < hop <= frame_len:
        raise ValueError(f"need 0 < hop <= frame_len, got hop={hop}, frame_len={frame_len}")
    w = _resolve_window(window, frame_len)

    n_frames = -(-x.size // hop)
    padded = np.zeros((n_frames - 1) * hop + frame_len)
    padded[: x.size] = x
    idx = np.arange(n_frames)[:, None] * hop + np.arange(frame_len)[None, :]
    return FrameSequence(padded[idx] * w, frame_len, hop, w)


def window_sum(window: np.ndarray, hop: int, n_frames: int) -> np.ndarray:
    """Overlap-added window weights over the padded output span."""
    frame_len = window.size
    total = np.zeros((n_frames - 1) * hop + frame_len)
    for i in range(n_frames):
        total[i * hop : i * hop + frame_len] += window
    return total


def overlap_add(frames: FrameSequence, original_len: int, sample_rate: int = 8000) -> AudioBuffer:
    """Overlap-add frames and divide by the summed analysis window.

    The output is truncated to ``original_len`` samples.
    """
    n_frames = len(frames)
    if original_len <= 0:
        raise ValueError("original_len must be positive")
    if n_frames != -(-original_len // frames.hop):
        raise ValueError(
            f"{n_frames} frames with hop {frames.hop} do not match a signal of {original_len} samples"
        )
    out = np.zeros((n_frames - 1) * frames.hop + frames.frame_len)
    for i, frame in enumerate(frames.frames):
        out[i * frames.hop : i * frames.hop + frames.frame_len] += frame
    wsum = window_sum(frames.window, frames.hop, n_frames)
    covered = wsum > 1e-12
    out[covered] /= wsum[covered]
    out[~covered] = 0.0
    return AudioBuffer(out[:original_len], sample_rate)
