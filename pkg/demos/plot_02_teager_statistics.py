"""
Teager energy and its distribution
==================================

Teager-operated subband coefficients are non-negative and heavy-tailed.
Fit exponential and Gaussian models to them, compare the fits with AIC,
and measure how far the noisy-speech histograms are from noise and from
clean speech.
"""

import numpy as np

from pwpshrink import aic, fit_exponential, fit_gaussian, gen_test_signal, histogram, symmetric_kl, teager, white_noise
from pwpshrink.analysis import subband_te
from pwpshrink.metrics import mix_at_snr

# The operator recovers A^2 sin^2(w) from a pure cosine.
m = np.arange(64)
print("TE of 2 cos(0.3 m):", teager(2 * np.cos(0.3 * m)).values[5], "expected", 4 * np.sin(0.3) ** 2)

clean = gen_test_signal("vowel", 2.0)
noisy, noise = mix_at_snr(clean, white_noise(len(clean), seed=1), 0.0)
pooled = {name: subband_te(buf) for name, buf in (("noisy", noisy), ("noise", noise), ("clean", clean))}

# Exponential vs Gaussian on every band of the noisy signal
wins = 0
for k, values in enumerate(pooled["noisy"], 1):
    e, g = fit_exponential(values), fit_gaussian(values)
    wins += aic(e) < aic(g)
    if k in (1, 8, 16, 24):
        print(f"band {k:2d}: AIC exponential {aic(e):10.1f}  gaussian {aic(g):10.1f}")
print(f"exponential preferred in {wins} of {len(pooled['noisy'])} bands")

# Histogram of one band, density against the fitted exponential
values = pooled["noisy"][4]
h = histogram(values, 20)
fit = fit_exponential(values)
for c, d in list(zip(h.centers, h.density()))[:5]:
    print(f"TE {c:9.3e}  empirical {d:10.3e}  exponential {fit.pdf(c):10.3e}")

# At 0 dB the noisy histograms sit closer to the noise than to clean speech
for k in (0, 10, 20):
    top = max(pooled[r][k].max() for r in pooled)
    hs, hn, hc = (histogram(pooled[r][k], 50, upper=top) for r in ("noisy", "noise", "clean"))
    print(f"band {k + 1:2d}: SKL(noisy, noise) {symmetric_kl(hs, hn):.3f}  SKL(noisy, clean) {symmetric_kl(hs, hc):.3f}")
