"""
Command-line front end.

Subcommands: ``enhance``, ``evaluate``, ``analyze``, ``gen``. Exit codes:
0 success, 1 partial failure (some evaluation cells failed), 2 I/O or
usage error, 3 unsupported audio format.
"""
from __future__ import annotations

import argparse
import csv
import logging
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from .analysis import run_analysis
from .framing import AudioBuffer
from .metrics import mix_at_snr, score
from .pipeline import EnhanceConfig, enhance_signal
from .signals import SIGNAL_KINDS, gen_test_signal, white_noise
from .wavio import AudioFormatError, read_wav, write_wav

log = logging.getLogger("pwpshrink")

EXIT_OK, EXIT_PARTIAL, EXIT_IO, EXIT_FORMAT = 0, 1, 2, 3

METHODS = {
    "proposed": {"shrinkage": "proposed_custom", "threshold_rule": "exponential"},
    "universal": {"shrinkage": "hard", "threshold_rule": "universal"},
    "gaussian_threshold": {"shrinkage": "proposed_custom", "threshold_rule": "gaussian"},
    "soft": {"shrinkage": "soft", "threshold_rule": "exponential"},
    "hard": {"shrinkage": "hard", "threshold_rule": "exponential"},
    "semisoft": {"shrinkage": "semisoft", "threshold_rule": "exponential"},
    "mu_law": {"shrinkage": "mu_law", "threshold_rule": "exponential"},
}

REPORT_COLUMNS = ["clean", "noise", "snr_db", "method", "snrseg_noisy", "snrseg_enh", "improvement", "wss",
                  "status"]


class ConfigError(ValueError):
    pass


def _coerce(name, raw, default):
    if raw.lower() in ("none", ""):
        return None
    if isinstance(default, bool):
        return raw.lower() in ("1", "true", "yes", "on")
    if isinstance(default, int):
        return int(raw)
    if isinstance(default, float):
        return float(raw)
    return raw


def parse_config_text(text: str, source: str = "<config>") -> dict:
    """Parse flat ``key = value`` lines into typed EnhanceConfig overrides."""
    defaults = {f.name: f.default for f in fields(EnhanceConfig)}
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in defaults:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        try:
            out[key] = _coerce(key, value, defaults[key])
        except ValueError as exc:
            raise ConfigError(f"{source}:{lineno}: bad value for {key}: {value!r}") from exc
    return out


def load_config(path=None, **overrides) -> EnhanceConfig:
    """Config file values, then non-None overrides, on top of the defaults."""
    values = {}
    if path:
        values.update(parse_config_text(Path(path).read_text(), str(path)))
    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return EnhanceConfig(**values)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def _flag_overrides(args) -> dict:
    return {
        "noise_mode": getattr(args, "noise_mode", None),
        "threshold_mapping": getattr(args, "threshold_mapping", None),
        "alpha": getattr(args, "alpha", None),
        "mu": getattr(args, "mu", None),
    }


def method_config(base: EnhanceConfig, method: str) -> EnhanceConfig:
    if method not in METHODS:
        raise ConfigError(f"unknown method {method!r}; expected one of {sorted(METHODS)}")
    return base.replace(**METHODS[method])


def _parse_list(text, cast):
    return [cast(item) for item in str(text).replace(";", ",").split(",") if item.strip()]


@dataclass
class RunManifest:
    """One evaluation grid: every clean input x noise x SNR x method."""

    inputs: list
    noises: list
    snrs: list
    methods: list
    out_dir: Path
    config_path: str | None = None
    overrides: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.inputs:
            raise ConfigError("no clean inputs")
        if not self.noises:
            raise ConfigError("no noise sources")
        if not self.snrs:
            raise ConfigError("SNR list is empty")
        if not self.methods:
            raise ConfigError("method list is empty")
        for m in self.methods:
            if m not in METHODS:
                raise ConfigError(f"unknown method {m!r}")
        self.out_dir = Path(self.out_dir)


def load_source(spec: str, sample_rate: int = 8000, length: int | None = None) -> AudioBuffer:
    """Resolve a clean-speech or noise source.

    ``synth:KIND[:SECONDS]`` generates a bundled test signal, ``white[:SEED]``
    white Gaussian noise (needs ``length``), anything else is a WAV path.
    """
    if spec.startswith("synth:"):
        parts = spec.split(":")
        duration = float(parts[2]) if len(parts) > 2 else 2.0
        return gen_test_signal(parts[1], duration, sample_rate)
    if spec == "white" or spec.startswith("white:"):
        seed = int(spec.split(":")[1]) if ":" in spec else 0
        if length is None:
            raise ConfigError("white noise needs a target length")
        return white_noise(length, sample_rate, seed)
    return read_wav(spec)


def fit_length(noise: AudioBuffer, n: int) -> AudioBuffer:
    """Tile or truncate ``noise`` to ``n`` samples."""
    reps = -(-n // len(noise))
    return AudioBuffer(np.tile(noise.samples, reps)[:n], noise.sample_rate)


def _fmt(v):
    return f"{v:.6f}"


def evaluate_cell(clean, noise, snr, method, base_cfg):
    cfg = method_config(base_cfg, method)
    noisy, scaled = mix_at_snr(clean, fit_length(noise, len(clean)), snr)
    enhanced = enhance_signal(noisy, scaled if cfg.noise_mode == "oracle" else None, cfg)
    return score(clean, noisy, enhanced)


def cmd_evaluate(manifest: RunManifest) -> int:
    """Run the evaluation grid and write ``report.csv`` into the output directory."""
    try:
        manifest.out_dir.mkdir(parents=True, exist_ok=True)
        report = manifest.out_dir / "report.csv"
        report.touch()
    except OSError as exc:
        log.error("cannot write to %s: %s", manifest.out_dir, exc)
        return EXIT_IO
    base_cfg = load_config(manifest.config_path, **manifest.overrides)

    rows, failed = [], False
    for clean_spec in manifest.inputs:
        try:
            clean = load_source(clean_spec, base_cfg.sample_rate)
            clean_err = None
        except (OSError, ValueError) as exc:
            clean, clean_err = None, exc
        for noise_spec in manifest.noises:
            noise, noise_err = None, clean_err
            if clean is not None:
                try:
                    noise = load_source(noise_spec, clean.sample_rate, len(clean))
                except (OSError, ValueError) as exc:
                    noise_err = exc
            for snr in manifest.snrs:
                for method in manifest.methods:
                    row = {"clean": clean_spec, "noise": noise_spec, "snr_db": f"{snr:g}", "method": method}
                    try:
                        if noise_err is not None:
                            raise noise_err
                        rep = evaluate_cell(clean, noise, snr, method, base_cfg)
                        row.update(snrseg_noisy=_fmt(rep.snr_seg_noisy), snrseg_enh=_fmt(rep.snr_seg_enhanced),
                                   improvement=_fmt(rep.snr_seg_improvement), wss=_fmt(rep.wss), status="ok")
                    except (OSError, ValueError, ArithmeticError) as exc:
                        failed = True
                        log.warning("cell %s/%s/%g/%s failed: %s", clean_spec, noise_spec, snr, method, exc)
                        row.update(snrseg_noisy="", snrseg_enh="", improvement="", wss="",
                                   status=f"error: {exc}".replace("\n", " "))
                    rows.append(row)

    with open(report, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=REPORT_COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    return EXIT_PARTIAL if failed else EXIT_OK


def cmd_enhance(in_path, out_path, config: EnhanceConfig, noise_ref_path=None) -> int:
    """Enhance one WAV file into another of the same rate and length."""
    try:
        noisy = read_wav(in_path)
        noise_ref = read_wav(noise_ref_path) if noise_ref_path else None
    except AudioFormatError as exc:
        log.error("%s", exc)
        return EXIT_FORMAT
    except OSError as exc:
        log.error("cannot read input: %s", exc)
        return EXIT_IO
    try:
        enhanced = enhance_signal(noisy, noise_ref, config.replace(sample_rate=noisy.sample_rate))
    except ValueError as exc:
        log.error("%s", exc)
        return EXIT_IO
    try:
        write_wav(out_path, enhanced)
    except OSError as exc:
        log.error("cannot write %s: %s", out_path, exc)
        return EXIT_IO
    return EXIT_OK


def cmd_analyze(in_path, noise_path, out_dir, config: EnhanceConfig = EnhanceConfig(), snr_db: float = 0.0) -> int:
    """Histogram, AIC, divergence and threshold-curve CSVs for a clean/noise pair."""
    try:
        clean = load_source(str(in_path), config.sample_rate)
        noise = load_source(str(noise_path), clean.sample_rate, len(clean))
    except AudioFormatError as exc:
        log.error("%s", exc)
        return EXIT_FORMAT
    except (OSError, ConfigError) as exc:
        log.error("cannot read input: %s", exc)
        return EXIT_IO
    try:
        run_analysis(clean, fit_length(noise, len(clean)), out_dir, snr_db,
                     config.replace(sample_rate=clean.sample_rate))
    except OSError as exc:
        log.error("cannot write analysis output: %s", exc)
        return EXIT_IO
    return EXIT_OK


def cmd_gen(kind, out_path, duration=2.0, sample_rate=8000, seed=0) -> int:
    if kind == "white":
        buf = white_noise(int(round(duration * sample_rate)), sample_rate, seed, std=0.1)
    else:
        buf = gen_test_signal(kind, duration, sample_rate, seed)
    try:
        write_wav(out_path, buf)
    except OSError as exc:
        log.error("cannot write %s: %s", out_path, exc)
        return EXIT_IO
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pwpshrink", description=__doc__.split("\n\n")[0].strip())
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def tuning(p):
        p.add_argument("--config", help="key=value config file")
        p.add_argument("--noise-mode", choices=["tracking", "oracle"])
        p.add_argument("--threshold-mapping", choices=["sqrt", "direct"])
        p.add_argument("--alpha", type=float)
        p.add_argument("--mu", type=float)

    p = sub.add_parser("enhance", help="enhance a 16-bit mono WAV file")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--method", default="proposed", choices=sorted(METHODS))
    p.add_argument("--noise-ref", help="exact noise signal (oracle mode)")
    tuning(p)

    p = sub.add_parser("evaluate", help="mix, enhance and score a grid of conditions")
    p.add_argument("inputs", nargs="+", help="clean WAV paths or synth:KIND[:SECONDS]")
    p.add_argument("--noise", action="append", help="noise WAV path or white[:SEED] (repeatable)")
    p.add_argument("--snr", default="15,10,5,0,-5,-10,-15", help="comma-separated SNRs in dB")
    p.add_argument("--method", default="proposed", help="comma-separated methods")
    p.add_argument("--out", required=True)
    tuning(p)

    p = sub.add_parser("analyze", help="statistical analysis exports")
    p.add_argument("input", help="clean WAV path or synth:KIND[:SECONDS]")
    p.add_argument("noise", help="noise WAV path or white[:SEED]")
    p.add_argument("--snr", type=float, default=0.0)
    p.add_argument("--out", required=True)
    tuning(p)

    p = sub.add_parser("gen", help="write a synthetic test signal")
    p.add_argument("kind", choices=list(SIGNAL_KINDS) + ["white"])
    p.add_argument("output")
    p.add_argument("--duration", type=float, default=2.0)
    p.add_argument("--rate", type=int, default=8000)
    p.add_argument("--seed", type=int, default=0)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        if args.command == "gen":
            return cmd_gen(args.kind, args.output, args.duration, args.rate, args.seed)
        overrides = _flag_overrides(args)
        if args.command == "evaluate":
            manifest = RunManifest(
                inputs=args.inputs, noises=args.noise or ["white"], snrs=_parse_list(args.snr, float),
                methods=_parse_list(args.method, str), out_dir=args.out, config_path=args.config,
                overrides=overrides,
            )
            return cmd_evaluate(manifest)
        cfg = load_config(args.config, **overrides)
        if args.command == "enhance":
            return cmd_enhance(args.input, args.output, method_config(cfg, args.method), args.noise_ref)
        return cmd_analyze(args.input, args.noise, args.out, cfg, args.snr)
    except ConfigError as exc:
        log.error("%s", exc)
        return EXIT_IO
    except OSError as exc:
        log.error("%s", exc)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
