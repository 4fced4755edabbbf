"""
Statistical analysis exports: TE histograms with fitted densities, AIC
comparison of exponential vs Gaussian models, subband divergences, and
threshold-versus-SNR curves.
"""
from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .framing import frame_signal
from .pipeline import EnhanceConfig
from .pwpt import pwpt_forward
from .stats import DegenerateFitError, aic, fit_exponential, fit_gaussian, histogram, symmetric_kl, teager
from .thresholding import exp_threshold, gauss_threshold

__all__ = [
    "subband_te",
    "aic_rows",
    "aic_separation",
    "threshold_curve",
    "histogram_rows",
    "divergence_rows",
    "run_analysis",
]

AIC_COLUMNS = ["role", "subband", "f_lo", "f_hi", "n", "exp_scale", "exp_aic",
               "gauss_mean", "gauss_var", "gauss_aic", "better"]


def subband_te(buf, cfg: EnhanceConfig = EnhanceConfig()) -> list[np.ndarray]:
    """Rectified TE values of every frame, pooled per subband."""
    tree = cfg.tree
    frames = frame_signal(buf, cfg.frame_len, cfg.hop)
    pooled = [[] for _ in tree.leaves]
    for frame in frames.frames:
        for k, c in enumerate(pwpt_forward(frame, tree).coeffs):
            pooled[k].append(teager(c).values)
    return [np.concatenate(p) for p in pooled]


def _fits(values):
    try:
        e = fit_exponential(values)
    except DegenerateFitError:
        e = None
    try:
        g = fit_gaussian(values)
    except DegenerateFitError:
        g = None
    return e, g


def aic_rows(roles: dict, cfg: EnhanceConfig = EnhanceConfig()) -> list[dict]:
    """One row per (role, subband) comparing the two model fits.

    ``roles`` maps a label (e.g. ``"noisy"``) to a signal.
    """
    tree = cfg.tree
    rows = []
    for role, buf in roles.items():
        for k, values in enumerate(subband_te(buf, cfg)):
            e, g = _fits(values)
            leaf = tree.leaves[k]
            e_aic = aic(e) if e else float("nan")
            g_aic = aic(g) if g else float("nan")
            if e and g:
                better = "exponential" if e_aic < g_aic else "gaussian"
            else:
                better = "degenerate"
            rows.append({
                "role": role, "subband": k + 1, "f_lo": leaf.f_lo, "f_hi": leaf.f_hi, "n": values.size,
                "exp_scale": e.params[0] if e else float("nan"), "exp_aic": e_aic,
                "gauss_mean": g.params[0] if g else float("nan"),
                "gauss_var": g.params[1] if g else float("nan"), "gauss_aic": g_aic,
                "better": better,
            })
    return rows


def aic_separation(rows, role: str) -> float:
    """Fraction of subbands of ``role`` where the exponential model wins."""
    sel = [r for r in rows if r["role"] == role]
    return sum(r["better"] == "exponential" for r in sel) / len(sel)


def threshold_curve(snr_db=np.arange(-15, 16), sigma_n2: float = 1.0) -> list[dict]:
    """Exponential and Gaussian thresholds against subband SNR in dB."""
    rows = []
    for snr in np.asarray(snr_db, dtype=float):
        gamma = 10.0 ** (snr / 10.0)
        rows.append({"snr_db": snr, "lambda_exponential": exp_threshold(sigma_n2, gamma),
                     "lambda_gaussian": gauss_threshold(sigma_n2, gamma)})
    return rows


def histogram_rows(role: str, pooled, n_bins: int = 50) -> list[dict]:
    """Histogram of each subband with fitted densities at the bin centres."""
    rows = []
    for k, values in enumerate(pooled):
        h = histogram(values, n_bins)
        e, g = _fits(values)
        centers, dens = h.centers, h.density()
        e_pdf = e.pdf(centers) if e else np.full(centers.size, np.nan)
        g_pdf = g.pdf(centers) if g else np.full(centers.size, np.nan)
        for i in range(h.n_bins):
            rows.append({"role": role, "subband": k + 1, "bin_lo": h.bin_edges[i], "bin_hi": h.bin_edges[i + 1],
                         "prob": h.probs[i], "density": dens[i], "exp_pdf": e_pdf[i], "gauss_pdf": g_pdf[i]})
    return rows


def divergence_rows(noisy, noise, clean, n_bins: int = 50) -> list[dict]:
    """Symmetric KL between TE histograms of noisy/noise and noisy/clean, per subband."""
    rows = []
    for k, (s, n, r) in enumerate(zip(noisy, noise, clean)):
        top = max(s.max(), n.max(), r.max())
        hs, hn, hr = (histogram(v, n_bins, upper=top) for v in (s, n, r))
        rows.append({"subband": k + 1, "skl_noisy_noise": symmetric_kl(hs, hn),
                     "skl_noisy_clean": symmetric_kl(hs, hr)})
    return rows


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.10g}"
    return v


def write_rows(path, rows, columns=None) -> None:
    columns = columns or list(rows[0])
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({c: _fmt(row[c]) for c in columns})


def run_analysis(clean, noise, out_dir, snr_db: float = 0.0, cfg: EnhanceConfig = EnhanceConfig()) -> dict:
    """Write every analysis CSV for one clean/noise pair mixed at ``snr_db``.

    Returns a mapping of output names to paths.
    """
    from .metrics import mix_at_snr

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    noisy, scaled = mix_at_snr(clean, noise, snr_db)
    roles = {"noisy": noisy, "noise": scaled, "clean": clean}
    pooled = {role: subband_te(buf, cfg) for role, buf in roles.items()}

    paths = {}
    rows = aic_rows(roles, cfg)
    paths["aic"] = out / "aic_table.csv"
    write_rows(paths["aic"], rows, AIC_COLUMNS)

    long_rows = []
    for r in rows:
        long_rows.append({"role": r["role"], "subband": r["subband"], "family": "exponential",
                          "param": _fmt(r["exp_scale"]), "aic": r["exp_aic"]})
        long_rows.append({"role": r["role"], "subband": r["subband"], "family": "gaussian",
                          "param": f"{_fmt(r['gauss_mean'])};{_fmt(r['gauss_var'])}", "aic": r["gauss_aic"]})
    paths["aic_long"] = out / "aic_fits.csv"
    write_rows(paths["aic_long"], long_rows)

    for role in roles:
        paths[f"hist_{role}"] = out / f"hist_{role}.csv"
        write_rows(paths[f"hist_{role}"], histogram_rows(role, pooled[role], cfg.histogram_bins))

    paths["divergence"] = out / "divergence.csv"
    write_rows(paths["divergence"], divergence_rows(pooled["noisy"], pooled["noise"], pooled["clean"],
                                                    cfg.histogram_bins))
    paths["thresholds"] = out / "threshold_curve.csv"
    write_rows(paths["thresholds"], threshold_curve())
    return paths
