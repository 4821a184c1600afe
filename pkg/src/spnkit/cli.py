"""Command-line interface: reproducible simulate / extract / match runs.

Exit codes: 0 success (or match), 1 no-match from the ``match`` subcommand,
2 any error.  All artifacts are deterministic functions of the config and
seed, regardless of --jobs.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import io
from .capture import CaptureSettings, SceneField, capture, optics_from_dict, row_profile
from .exceptions import ConfigurationError, SpnkitError
from .fingerprint import SuppressionConfig, dark_fingerprint, prnu_reference
from .matcher import match_report
from .profile import ProfileSpec, generate_profile
from .residue import WaveletConfig


@dataclass
class CapturePlan:
    name: str
    count: int
    t_int: float
    temperature: float
    optics: dict = field(default_factory=lambda: {"type": "pinhole"})
    shutter_open: bool = True
    scene: dict | None = None

    @classmethod
    def from_dict(cls, d: dict) -> "CapturePlan":
        return cls(
            name=str(d["name"]),
            count=int(d["count"]),
            t_int=float(d["t_int"]),
            temperature=float(d["temperature"]),
            optics=dict(d.get("optics", {"type": "pinhole"})),
            shutter_open=bool(d.get("shutter_open", True)),
            scene=d.get("scene"),
        )

    def settings(self) -> CaptureSettings:
        return CaptureSettings(
            t_int=self.t_int,
            temperature=self.temperature,
            optics=optics_from_dict(self.optics),
            shutter_open=self.shutter_open,
        )

    def scene_field(self, shape) -> SceneField | None:
        if not self.shutter_open:
            return None
        if self.scene is None:
            raise ConfigurationError(f"plan {self.name!r} opens the shutter but has no scene")
        kind = self.scene.get("kind", "flat")
        if kind == "flat":
            return SceneField.flat_field(shape, float(self.scene["photon_flux"]))
        raise ConfigurationError(f"unknown scene kind {kind!r} in plan {self.name!r}")


@dataclass
class ExperimentConfig:
    seed: int
    output_dir: str
    profile: dict
    captures: list[CapturePlan]

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        try:
            config = cls(
                seed=int(d["seed"]),
                output_dir=str(d["output_dir"]),
                profile=dict(d["profile"]),
                captures=[CapturePlan.from_dict(p) for p in d.get("captures", [])],
            )
        except KeyError as exc:
            raise ConfigurationError(f"config missing required key: {exc}") from exc
        names = [plan.name for plan in config.captures]
        if len(set(names)) != len(names):
            raise ConfigurationError(f"capture plan names must be unique, got {names}")
        return config

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _resolve_profile(config: ExperimentConfig, config_dir: Path):
    if "path" in config.profile:
        return io.load_profile(config_dir / config.profile["path"])
    spec = ProfileSpec(**{**config.profile, "seed": config.seed})
    return generate_profile(spec)


def cmd_simulate(args) -> int:
    if args.config is None:
        raise ConfigurationError("simulate needs --config pointing at an experiment JSON")
    config = ExperimentConfig.load(args.config)
    if args.seed is not None:
        config.seed = args.seed
    out_dir = Path(args.output or config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    profile = _resolve_profile(config, Path(args.config).parent)

    profile_path = out_dir / "profile.json"
    io.save_profile(profile_path, profile)

    tasks = []
    frame_index = 0
    for plan in config.captures:
        settings = plan.settings()
        scene = plan.scene_field(profile.shape)
        for i in range(plan.count):
            name = f"{plan.name}_{i:04d}.pgm"
            tasks.append((name, settings, scene, frame_index))
            frame_index += 1

    def run(task):
        name, settings, scene, index = task
        frame = capture(profile, settings, scene, index)
        io.write_frame(out_dir / name, frame)
        return name

    if args.jobs > 1 and tasks:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            list(pool.map(run, tasks))
    else:
        for task in tasks:
            run(task)

    artifacts = [profile_path.name]
    for name, *_ in tasks:
        artifacts.append(name)
        artifacts.append(str(io.frame_sidecar_path(name)))
    manifest_lines = [f"{_sha256(out_dir / rel)}  {rel}" for rel in artifacts]
    manifest = "\n".join(manifest_lines) + "\n"
    (out_dir / "manifest.txt").write_text(manifest)
    sys.stdout.write(manifest)
    return 0


def _wavelet_from_args(args) -> WaveletConfig:
    windows = tuple(int(w) for w in args.variance_windows.split(","))
    return WaveletConfig(levels=args.levels, base_sigma=args.base_sigma, variance_windows=windows)


def cmd_extract(args) -> int:
    frames = [io.read_frame(p) for p in args.frames]
    wavelet = _wavelet_from_args(args)
    if args.kind == "prnu":
        fp = prnu_reference(frames, wavelet)
    else:
        suppression = SuppressionConfig(
            enabled=not args.no_suppression, hot_sigma_threshold=args.hot_sigma
        )
        fp = dark_fingerprint(frames, wavelet, suppression)
    io.save_fingerprint(args.out, fp)
    norms = ", ".join(
        f"{name}={float(np.linalg.norm(p)):.6f}"
        for name, p in zip(fp.channel_names, fp.planes)
    )
    print(f"wrote {args.out}: kind={fp.kind} frames={fp.frame_count} norms: {norms}")
    return 0


def cmd_match(args) -> int:
    reference = io.load_fingerprint(args.reference)
    probe = io.load_fingerprint(args.probe)
    report = match_report(
        reference, probe, args.threshold, track_cfa_rotation=not args.no_cfa_tracking
    )
    print(
        f"rho_0={report.rho_0:.6f} rho_90={report.rho_90:.2e} rho_180={report.rho_180:.2e} "
        f"rho_270={report.rho_270:.2e} rho_flipped={report.rho_flipped:.2e} "
        f"pce_0={report.pce_0:.1f} decision={report.decision}"
    )
    if args.json:
        io.write_report_json(args.json, report)
    if args.csv:
        io.write_report_csv(args.csv, report)
    return 0 if report.decision == "match" else 1


def cmd_plot_row(args) -> int:
    frame = io.read_frame(args.frame)
    series = row_profile(frame, args.row)
    compare = None
    if args.compare:
        other = io.read_frame(args.compare)
        compare = row_profile(other, args.row)
    text = io.row_csv_text(series, compare)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_export_fp_image(args) -> int:
    fp = io.load_fingerprint(args.container)
    io.export_fingerprint_image(args.out, fp, args.channel)
    print(f"wrote {args.out} ({fp.plane_shape[0]}x{fp.plane_shape[1]}, channel {args.channel})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spnkit",
        description="Sensor pattern noise toolkit: simulate frames, extract fingerprints, match",
    )
    parser.add_argument("--seed", type=int, default=None, help="override the config seed")
    parser.add_argument("--jobs", type=int, default=1, help="parallel workers for simulation")
    parser.add_argument("--config", default=None, help="experiment config JSON (for simulate)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run a capture config, writing PGM frames + sidecars")
    # SUPPRESS keeps a pre-subcommand --config visible when the flag is repeated here
    p.add_argument("--config", default=argparse.SUPPRESS, help="experiment config JSON")
    p.add_argument("--output", default=None, help="override the config output_dir")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("extract", help="build a fingerprint container from frames")
    p.add_argument("--kind", choices=("prnu", "dark"), required=True)
    p.add_argument("--out", required=True, help="output fingerprint container path")
    p.add_argument("--levels", type=int, default=4)
    p.add_argument("--base-sigma", type=float, default=5.0)
    p.add_argument("--variance-windows", default="3,5,7,9")
    p.add_argument("--hot-sigma", type=float, default=6.0)
    p.add_argument("--no-suppression", action="store_true", help="skip hot-pixel suppression (dark only)")
    p.add_argument("frames", nargs="+", help="input frame PGM paths")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("match", help="correlate a probe against a reference fingerprint")
    p.add_argument("--reference", required=True)
    p.add_argument("--probe", required=True)
    p.add_argument("--threshold", type=float, default=0.01)
    p.add_argument("--no-cfa-tracking", action="store_true", help="rotate planes in place")
    p.add_argument("--json", default=None, help="write the full report as JSON")
    p.add_argument("--csv", default=None, help="write the table-layout CSV row")
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("plot-row", help="export one frame row as CSV (index,DN)")
    p.add_argument("--frame", required=True)
    p.add_argument("--row", type=int, required=True)
    p.add_argument("--compare", default=None, help="second frame for an aligned series")
    p.add_argument("--out", default=None, help="output CSV path (default: stdout)")
    p.set_defaults(func=cmd_plot_row)

    p = sub.add_parser("export-fp-image", help="render a fingerprint channel to 8-bit PGM")
    p.add_argument("--container", required=True)
    p.add_argument("--channel", required=True, help="channel name, e.g. R, G1, G2, B")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export_fp_image)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.jobs < 1:
        parser.error("--jobs must be >= 1")
    try:
        return args.func(args)
    except (SpnkitError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
