"""Deterministic synthetic test signals (stand-ins for a speech corpus)."""
from __future__ import annotations

import numpy as np
from scipy.signal import chirp

from .framing import AudioBuffer

__all__ = ["gen_test_signal", "white_noise", "SIGNAL_KINDS"]

SIGNAL_KINDS = ("vowel", "chirp", "silence")

F0 = 120.0
# (centre Hz, bandwidth Hz, gain) of an /a/-like vowel
FORMANTS = ((730.0, 90.0, 1.0), (1090.0, 110.0, 0.5), (2440.0, 170.0, 0.25))
PEAK = 0.5


def _vowel(t, fs, rng):
    n_harm = int((fs / 2.0 - 1.0) // F0)
    h = np.arange(1, n_harm + 1)
    f = h * F0
    envelope = 0.25 + sum(g / (1.0 + ((f - fc) / bw) ** 2) for fc, bw, g in FORMANTS)
    amps = envelope / h
    phases = rng.uniform(0.0, 2.0 * np.pi, n_harm)
    x = (amps[:, None] * np.cos(2.0 * np.pi * f[:, None] * t[None, :] + phases[:, None])).sum(axis=0)
    # syllable-rate amplitude modulation
    x *= 0.55 + 0.45 * np.sin(2.0 * np.pi * 2.5 * t)
    return x


def gen_test_signal(kind: str = "vowel", duration: float = 1.0, sample_rate: int = 8000,
                    seed: int = 0) -> AudioBuffer:
    """Generate a synthetic signal.

    ``vowel`` is a 120 Hz harmonic stack shaped by three formants with a
    2.5 Hz amplitude modulation; ``chirp`` sweeps linearly from 100 to
    3500 Hz; ``silence`` is all zeros. Non-silent outputs peak at 0.5.
    """
    if duration <= 0:
        raise ValueError("duration must be positive")
    if kind not in SIGNAL_KINDS:
        raise ValueError(f"unknown signal kind {kind!r}; expected one of {SIGNAL_KINDS}")
    n = int(round(duration * sample_rate))
    t = np.arange(n) / sample_rate
    if kind == "silence":
        return AudioBuffer(np.zeros(n), sample_rate)
    if kind == "vowel":
        x = _vowel(t, sample_rate, np.random.default_rng(seed))
    else:
        x = chirp(t, f0=100.0, t1=max(t[-1], 1.0 / sample_rate), f1=3500.0, method="linear")
    peak = np.max(np.abs(x))
    return AudioBuffer(PEAK * x / peak if peak > 0 else x, sample_rate)


def white_noise(n_samples: int, sample_rate: int = 8000, seed: int = 0, std: float = 1.0) -> AudioBuffer:
    rng = np.random.default_rng(seed)
    return AudioBuffer(std * rng.standard_normal(n_samples), sample_rate)
