"""
Thresholds and shrinkage functions
==================================

How the exponential-model threshold moves with subband SNR compared with
the Gaussian-model one, and what the blended shrinkage curve looks like
for a few values of its shape parameter.
"""

import numpy as np

from pwpshrink import ShrinkageSpec, ThresholdPair, apply_shrinkage, exp_threshold, gauss_threshold, universal_threshold

print(" SNR dB   exponential   gaussian")
for snr_db in range(-15, 16, 5):
    g = 10 ** (snr_db / 10)
    print(f"{snr_db:7d}   {exp_threshold(1.0, g):11.4f}   {gauss_threshold(1.0, g):8.4f}")

# At vanishing SNR the exponential threshold settles at the noise level
# while the Gaussian one collapses to zero.
print("gamma = 1e-12:", exp_threshold(1.0, 1e-12), gauss_threshold(1.0, 1e-12))
print("universal threshold for 256 coefficients:", universal_threshold(1.0, 256))

# The blended rule with lambda1 = 1, lambda2 = 2
pair = ThresholdPair.from_lambda(1.0)
y = np.array([0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0])
print("y       " + " ".join(f"{v:6.2f}" for v in y))
for alpha in (0.0, 0.5, 1.0):
    out = apply_shrinkage(y, pair, ShrinkageSpec("proposed_custom", alpha=alpha, mu=255))
    print(f"a={alpha:<4}  " + " ".join(f"{v:6.3f}" for v in out))
for kind in ("hard", "soft"):
    out = apply_shrinkage(y, pair, ShrinkageSpec(kind))
    print(f"{kind:<8}" + " ".join(f"{v:6.3f}" for v in out))

# mu controls how strongly small coefficients are squashed
for mu in (1, 10, 255):
    print(f"mu={mu:<3}  y=0.5 -> {apply_shrinkage(0.5, pair, ShrinkageSpec('mu_law', mu=mu)):.4f}")
