"""
Spectrograms for external plotting
==================================

Write the magnitude spectrograms of clean, noisy and enhanced speech to
CSV files, one row per frequency bin and one column per frame.
"""

import sys
from pathlib import Path

import numpy as np

from pwpshrink import EnhanceConfig, enhance_signal, gen_test_signal, white_noise
from pwpshrink.metrics import mix_at_snr, spectrogram, write_spectrogram_csv

out_dir = Path(sys.argv[1] if len(sys.argv) > 1 else "spectrograms")
out_dir.mkdir(exist_ok=True)

clean = gen_test_signal("vowel", 2.0)
noisy, noise = mix_at_snr(clean, white_noise(len(clean), seed=1), 5.0)
enhanced = enhance_signal(noisy, noise, EnhanceConfig(noise_mode="oracle"))

for name, buf in (("clean", clean), ("noisy", noisy), ("enhanced", enhanced)):
    freqs, times, mag = spectrogram(buf, frame_len=256, hop=128)
    write_spectrogram_csv(out_dir / f"{name}.csv", freqs, times, mag)
    # the harmonic at 120 Hz and the first formant near 730 Hz dominate
    top = freqs[np.argsort(mag.mean(axis=1))[::-1][:3]]
    print(f"{name:<9} {mag.shape[0]} bins x {mag.shape[1]} frames, strongest bins at {top} Hz")
print("written to", out_dir.resolve())
