"""
Noise mixing and objective quality measures.

Segmental SNR follows the usual convention of clamping each frame to
[-10, 35] dB and skipping silent reference frames. The weighted spectral
slope (WSS) distance compares critical-band spectral slopes of the
reference and processed signals with Klatt's peak-emphasis weights.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .framing import AudioBuffer, frame_signal

__all__ = [
    "UndefinedMetricError",
    "MetricsReport",
    "mix_at_snr",
    "measured_snr",
    "segsnr",
    "segsnr_improvement",
    "wss",
    "spectrogram",
    "write_spectrogram_csv",
    "score",
]

SEGSNR_FLOOR = -10.0
SEGSNR_CEIL = 35.0

# Critical bands: centre frequencies and bandwidths in Hz (25 Bark-spaced bands).
CRIT_CENTERS = np.array([
    50.0, 120.0, 190.0, 260.0, 330.0, 400.0, 470.0, 540.0, 617.372, 703.378,
    798.717, 904.128, 1020.38, 1148.30, 1288.72, 1442.54, 1610.70, 1794.16,
    1993.93, 2211.08, 2446.71, 2701.97, 2978.04, 3276.17, 3597.63,
])
CRIT_BANDWIDTHS = np.array([
    70.0, 70.0, 70.0, 70.0, 70.0, 70.0, 70.0, 77.3724, 86.0056, 95.3398,
    105.411, 116.256, 127.914, 140.423, 153.823, 168.154, 183.457, 199.776,
    217.153, 235.631, 255.255, 276.072, 298.126, 321.465, 346.136,
])
KLATT_KMAX = 20.0
KLATT_KLOCMAX = 1.0


class UndefinedMetricError(ValueError):
    """No frame of the reference carries enough energy to score."""


def _samples(x):
    return x.samples if isinstance(x, AudioBuffer) else np.asarray(x, dtype=float)


def _rate(*bufs, default=8000):
    for b in bufs:
        if isinstance(b, AudioBuffer):
            return b.sample_rate
    return default


@dataclass
class MetricsReport:
    snr_seg_noisy: float
    snr_seg_enhanced: float
    wss: float
    per_frame: dict = field(default_factory=dict, repr=False)

    @property
    def snr_seg_improvement(self) -> float:
        return self.snr_seg_enhanced - self.snr_seg_noisy


def mix_at_snr(clean, noise, snr_db: float):
    """Scale ``noise`` so the mixture has the requested SNR.

    Returns ``(noisy, scaled_noise)`` as AudioBuffers.
    """
    c, n = _samples(clean), _samples(noise)
    if c.shape != n.shape:
        raise ValueError(f"clean and noise lengths differ: {c.size} vs {n.size}")
    if isinstance(clean, AudioBuffer) and isinstance(noise, AudioBuffer) and clean.sample_rate != noise.sample_rate:
        raise ValueError("clean and noise sample rates differ")
    p_clean, p_noise = np.mean(c * c), np.mean(n * n)
    if p_clean <= 0 or p_noise <= 0:
        raise ValueError("mixing needs clean and noise with positive power")
    gain = np.sqrt(p_clean / (p_noise * 10.0 ** (snr_db / 10.0)))
    fs = _rate(clean, noise)
    scaled = gain * n
    return AudioBuffer(c + scaled, fs), AudioBuffer(scaled, fs)


def measured_snr(clean, noise) -> float:
    c, n = _samples(clean), _samples(noise)
    return float(10.0 * np.log10(np.sum(c * c) / np.sum(n * n)))


def _segsnr_frames(clean, processed, frame_len):
    c, p = _samples(clean), _samples(processed)
    if c.shape != p.shape:
        raise ValueError(f"signal lengths differ: {c.size} vs {p.size}")
    if frame_len < 16:
        raise ValueError("segmental SNR frame length must be >= 16")
    n_frames = c.size // frame_len
    if n_frames == 0:
        raise ValueError(f"signal of {c.size} samples is shorter than one {frame_len}-sample frame")
    c = c[: n_frames * frame_len].reshape(n_frames, frame_len)
    p = p[: n_frames * frame_len].reshape(n_frames, frame_len)
    sig = np.sum(c * c, axis=1)
    err = np.sum((c - p) ** 2, axis=1)
    keep = sig >= 1e-12
    if not keep.any():
        raise UndefinedMetricError("every reference frame is silent")
    with np.errstate(divide="ignore"):
        snr = 10.0 * np.log10(sig[keep] / err[keep])
    return np.clip(snr, SEGSNR_FLOOR, SEGSNR_CEIL)


def segsnr(clean, processed, frame_len: int = 256, per_frame: bool = False):
    """Mean clamped SNR over non-overlapping frames, in dB."""
    frames = _segsnr_frames(clean, processed, frame_len)
    return frames if per_frame else float(frames.mean())


def segsnr_improvement(clean, noisy, enhanced, frame_len: int = 256) -> float:
    return segsnr(clean, enhanced, frame_len) - segsnr(clean, noisy, frame_len)


def _crit_filters(n_half, fs):
    max_freq = fs / 2.0
    min_factor = np.exp(-30.0 / (2.0 * 2.303))  # -30 dB point
    j = np.arange(n_half)
    bank = np.empty((CRIT_CENTERS.size, n_half))
    for i, (fc, bw) in enumerate(zip(CRIT_CENTERS, CRIT_BANDWIDTHS)):
        f0 = fc / max_freq * n_half
        b = bw / max_freq * n_half
        row = np.exp(-11.0 * ((j - np.floor(f0)) / b) ** 2 + np.log(CRIT_BANDWIDTHS[0]) - np.log(bw))
        bank[i] = np.where(row > min_factor, row, 0.0)
    return bank


def _nearest_peaks(energy, slope):
    nb = energy.size
    peaks = np.empty(nb - 1)
    for i in range(nb - 1):
        n = i
        if slope[i] > 0:
            while n < nb - 1 and slope[n] > 0:
                n += 1
            peaks[i] = energy[n]
        else:
            while n >= 0 and slope[n] <= 0:
                n -= 1
            peaks[i] = energy[n + 1]
    return peaks


def _klatt_weights(energy, peaks):
    w_max = KLATT_KMAX / (KLATT_KMAX + energy.max() - energy[:-1])
    w_loc = KLATT_KLOCMAX / (KLATT_KLOCMAX + peaks - energy[:-1])
    return w_max * w_loc


def wss(clean, processed, sample_rate: int | None = None, frame_ms: float = 16.0, per_frame: bool = False):
    """Weighted spectral slope distance (lower is better, 0 for identical input).

    Frames of ``frame_ms`` milliseconds, hopped by a quarter frame and
    Hann windowed, are pooled into 25 critical bands. Slopes of the
    log band energies are compared under Klatt's weights, which favour
    bands near the global spectral peak and near local peaks.
    """
    c, p = _samples(clean), _samples(processed)
    if c.shape != p.shape:
        raise ValueError(f"signal lengths differ: {c.size} vs {p.size}")
    fs = sample_rate or _rate(clean, processed)
    win = int(round(frame_ms * fs / 1000.0))
    hop = max(win // 4, 1)
    if c.size < win:
        raise ValueError(f"signal of {c.size} samples is shorter than one {win}-sample WSS frame")
    n_fft = int(2 ** np.ceil(np.log2(2 * win)))
    n_half = n_fft // 2
    bank = _crit_filters(n_half, fs)
    window = 0.5 * (1.0 - np.cos(2.0 * np.pi * np.arange(1, win + 1) / (win + 1)))

    n_frames = (c.size - win) // hop + 1
    idx = np.arange(n_frames)[:, None] * hop + np.arange(win)[None, :]
    spec_c = np.abs(np.fft.fft(c[idx] * window, n_fft, axis=1)[:, :n_half]) ** 2
    spec_p = np.abs(np.fft.fft(p[idx] * window, n_fft, axis=1)[:, :n_half]) ** 2
    energy_c = 10.0 * np.log10(np.maximum(spec_c @ bank.T, 1e-10))
    energy_p = 10.0 * np.log10(np.maximum(spec_p @ bank.T, 1e-10))
    slope_c = np.diff(energy_c, axis=1)
    slope_p = np.diff(energy_p, axis=1)

    dist = np.empty(n_frames)
    for f in range(n_frames):
        w_c = _klatt_weights(energy_c[f], _nearest_peaks(energy_c[f], slope_c[f]))
        w_p = _klatt_weights(energy_p[f], _nearest_peaks(energy_p[f], slope_p[f]))
        w = 0.5 * (w_c + w_p)
        dist[f] = np.dot(w, (slope_c[f] - slope_p[f]) ** 2) / np.sum(w)
    return dist if per_frame else float(dist.mean())


def spectrogram(buf, frame_len: int = 256, hop: int | None = None, sample_rate: int | None = None):
    """Magnitude short-time DFT with a periodic Hamming window.

    Returns ``(freqs, times, mag)`` where ``mag`` has one row per frequency
    bin in ``[0, fs/2]`` and one column per frame.
    """
    if frame_len < 2 or frame_len & (frame_len - 1):
        raise ValueError(f"frame_len must be a power of two, got {frame_len}")
    hop = frame_len // 2 if hop is None else hop
    if not 0 < hop <= frame_len:
        raise ValueError("need 0 < hop <= frame_len")
    fs = sample_rate or _rate(buf)
    frames = frame_signal(buf, frame_len, hop)
    mag = np.abs(np.fft.rfft(frames.frames, axis=1)).T
    freqs = np.arange(frame_len // 2 + 1) * fs / frame_len
    times = np.arange(len(frames)) * hop / fs
    return freqs, times, mag


def write_spectrogram_csv(path, freqs, times, mag) -> None:
    """Header row of frame times, first column of bin frequencies."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["freq_hz"] + [f"{t:.6f}" for t in times])
        for f, row in zip(freqs, mag):
            writer.writerow([f"{f:.4f}"] + [f"{v:.8g}" for v in row])


def score(clean, noisy, enhanced, frame_len: int = 256) -> MetricsReport:
    """SegSNR of noisy and enhanced speech plus the WSS of the enhanced speech."""
    noisy_frames = segsnr(clean, noisy, frame_len, per_frame=True)
    enh_frames = segsnr(clean, enhanced, frame_len, per_frame=True)
    return MetricsReport(
        float(noisy_frames.mean()),
        float(enh_frames.mean()),
        wss(clean, enhanced),
        per_frame={"segsnr_noisy": noisy_frames, "segsnr_enhanced": enh_frames},
    )
