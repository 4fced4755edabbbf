"""16-bit PCM mono WAV reading and writing."""
from __future__ import annotations

import wave

import numpy as np

from .framing import AudioBuffer

__all__ = ["AudioFormatError", "read_wav", "write_wav"]

SCALE = 32768.0


class AudioFormatError(ValueError):
    """The file is a WAV file but not 16-bit PCM mono."""


def read_wav(path) -> AudioBuffer:
    """Read a 16-bit PCM mono WAV file into [-1, 1) floats.

    Raises ``OSError`` if the file cannot be opened and
    :class:`AudioFormatError` for stereo, non-16-bit or non-PCM data.
    """
    try:
        fh = wave.open(str(path), "rb")
    except wave.Error as exc:
        raise AudioFormatError(f"{path}: {exc}") from exc
    with fh:
        if fh.getnchannels() != 1:
            raise AudioFormatError(f"{path}: {fh.getnchannels()} channels, only mono is supported")
        if fh.getsampwidth() != 2:
            raise AudioFormatError(f"{path}: {8 * fh.getsampwidth()}-bit samples, only 16-bit PCM is supported")
        if fh.getcomptype() != "NONE":
            raise AudioFormatError(f"{path}: compressed WAV ({fh.getcomptype()}) is not supported")
        rate = fh.getframerate()
        raw = fh.readframes(fh.getnframes())
    data = np.frombuffer(raw, dtype="<i2").astype(float) / SCALE
    return AudioBuffer(data, rate)


def quantize(samples) -> np.ndarray:
    x = np.asarray(samples, dtype=float)
    return np.clip(np.round(x * SCALE), -32768, 32767).astype("<i2")


def write_wav(path, buf: AudioBuffer) -> None:
    """Write ``buf`` as 16-bit PCM mono, clipping to the int16 range."""
    with wave.open(str(path), "wb") as fh:
        fh.setnchannels(1)
        fh.setsampwidth(2)
        fh.setframerate(buf.sample_rate)
        fh.writeframes(quantize(buf.samples).tobytes())
