"""Command-line front end.

Subcommands::

    demo-ellipse   sweep the pump split and emit (D, V) ellipse loci
    scan           simulate one phase-stepped fringe scan to CSV
    calibrate      no-object estimate of the source term alpha * gamma
    synth          generate a synthetic cut-out letter object
    reconstruct    image an object map through the chain and invert it
    report         summarize an existing reconstruction directory

Exit codes: 0 success, 1 usage, 2 data/parse error, 3 physics-domain error
(for example a degenerate pump split that makes transmittance
unidentifiable).  Every stochastic command takes an explicit --seed and its
outputs are byte-identical across reruns.

Flags may also come from a key=value config file via --config; values given
on the command line override the file.
"""

import argparse
import os
import sys

import numpy as np

from .errors import DualityError, MapFormatError
from .imaging import read_report_dir, reconstruct, write_report_dir
from .maps import GLYPHS, load_map, save_map, synth_letter_object
from .measure import calibrate_no_object, estimate_visibility, simulate_fringe_scan
from .mzi import detection_probability
from .qiup import QiupConfig
from .states import make_two_path_state


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_common(p, seeded=True):
    p.add_argument("--config", help="key=value file supplying flag defaults")
    if seeded:
        p.add_argument("--seed", type=int, required=True,
                       help="master seed (required for stochastic commands)")


def _add_source_flags(p):
    p.add_argument("--p1", type=float, default=0.5, help="pump split probability into arm 1")
    p.add_argument("--gamma", type=float, default=1.0, help="pump degree of coherence")
    p.add_argument("--alpha", type=float, default=1.0, help="idler alignment overlap")
    p.add_argument("--fringe-phase", type=float, default=0.0, help="fixed fringe phase offset (rad)")


def build_parser() -> _Parser:
    parser = _Parser(prog="qduality",
                     description="Two-path duality and undetected-photon imaging simulator")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("demo-ellipse", help="emit (D, V) ellipse loci")
    p.add_argument("--etas", type=float, nargs="+", default=[0.0, 0.2, 0.5],
                   help="ellipticities (1 - coherence), each in [0, 1)")
    p.add_argument("--samples", type=int, default=201,
                   help="points in the pump-split sweep (odd counts include the balanced point)")
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--no-fig", action="store_true", help="skip the PNG figure")
    _add_common(p, seeded=False)
    p.set_defaults(func=cmd_demo_ellipse)

    p = sub.add_parser("scan", help="simulate one fringe scan to CSV")
    p.add_argument("--p1", type=float, default=0.5)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--overlap-phase", type=float, default=0.0,
                   help="phase of the marginal overlap (rad)")
    p.add_argument("--phi0", type=float, default=0.0, help="accumulated interferometer phase (rad)")
    p.add_argument("--grid-size", type=int, default=24)
    p.add_argument("--photons", type=int, default=100_000, help="photons per phase point")
    p.add_argument("--noiseless", action="store_true", help="counts = expectations, no sampling")
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--fig", action="store_true", help="also render counts + fit to PNG")
    _add_common(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("calibrate", help="no-object calibration of alpha * gamma")
    _add_source_flags(p)
    p.add_argument("--photons", type=int, default=1_000_000, help="total calibration budget")
    p.add_argument("--grid-size", type=int, default=24)
    p.add_argument("--noiseless", action="store_true")
    p.add_argument("--out", help="optional key=value output file")
    _add_common(p)
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("synth", help="generate a synthetic cut-out letter object")
    p.add_argument("--glyph", default="S", help=f"one of {sorted(GLYPHS)}")
    p.add_argument("--width", type=int, default=64)
    p.add_argument("--height", type=int, default=64)
    p.add_argument("--edge-softness", type=float, default=3.0,
                   help="ramp width (pixels) from opaque edge to full transmission")
    p.add_argument("--out", required=True, help="output path (.pgm or .csv)")
    p.add_argument("--format", choices=["pgm", "pgm-ascii", "csv"],
                   help="override the extension-based format choice")
    _add_common(p, seeded=False)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("reconstruct", help="image an object map and invert it")
    p.add_argument("--object", required=True, help="truth map path (.pgm or .csv)")
    _add_source_flags(p)
    p.add_argument("--budget", type=int, default=100_000, help="photons per phase point per pixel")
    p.add_argument("--grid-size", type=int, default=24)
    p.add_argument("--calibration-photons", type=int, default=None)
    p.add_argument("--no-calibration", action="store_true",
                   help="skip the no-object calibration (raw ellipse inversion)")
    p.add_argument("--noiseless", action="store_true")
    p.add_argument("--workers", type=int, default=0, help="thread-pool size (0 = serial)")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--no-fig", action="store_true", help="skip the PNG overview figure")
    _add_common(p)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("report", help="summarize an existing reconstruction directory")
    p.add_argument("--run-dir", required=True)
    p.add_argument("--no-fig", action="store_true", help="do not re-render the overview figure")
    _add_common(p, seeded=False)
    p.set_defaults(func=cmd_report)

    return parser


# -----------------------------
# Command implementations
# -----------------------------

def _require(cond: bool, message: str) -> None:
    if not cond:
        raise UsageError(message)


def _fig_path(out_path: str) -> str:
    root, _ = os.path.splitext(out_path)
    return root + ".png"


def cmd_demo_ellipse(args) -> int:
    for eta in args.etas:
        _require(0.0 <= eta < 1.0, f"ellipticity must lie in [0, 1), got {eta}")
    _require(args.samples >= 2, "need at least 2 sweep samples")
    p1_grid = np.linspace(0.0, 1.0, args.samples)
    loci = {}
    lines = ["eta,p1,predictability,visibility"]
    for eta in args.etas:
        gamma = 1.0 - eta
        d = np.abs(2.0 * p1_grid - 1.0)
        v = 2.0 * np.sqrt(p1_grid * (1.0 - p1_grid)) * gamma
        loci[eta] = (d, v)
        for p1, dk, vk in zip(p1_grid, d, v):
            lines.append(f"{eta:.17g},{p1:.17g},{dk:.17g},{vk:.17g}")
    with open(args.out, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    if not args.no_fig:
        from .figures import save_ellipse_figure
        save_ellipse_figure(loci, _fig_path(args.out))
    print(f"wrote {len(args.etas)} loci x {args.samples} points to {args.out}")
    return 0


def cmd_scan(args) -> int:
    _require(0.0 <= args.p1 <= 1.0, f"--p1 must lie in [0, 1], got {args.p1}")
    _require(0.0 <= args.gamma <= 1.0, f"--gamma must lie in [0, 1], got {args.gamma}")
    _require(args.grid_size >= 8, "--grid-size must be >= 8")
    _require(args.photons >= 1, "--photons must be >= 1")
    state = make_two_path_state(args.p1, args.gamma, args.overlap_phase, args.phi0)
    scan = simulate_fringe_scan(lambda phi: detection_probability(state, phi),
                                args.grid_size, args.photons, args.seed,
                                noiseless=args.noiseless)
    scan.write_csv(args.out)
    v_hat, phase, sigma_v = estimate_visibility(scan)
    if args.fig:
        from .figures import save_scan_figure
        save_scan_figure(scan, _fig_path(args.out), fit=(v_hat, phase))
    print(f"v_hat={v_hat:.17g}")
    print(f"fitted_phase={phase:.17g}")
    print(f"sigma_v={sigma_v:.17g}")
    return 0


def _config_from_args(args) -> QiupConfig:
    _require(0.0 <= args.p1 <= 1.0, f"--p1 must lie in [0, 1], got {args.p1}")
    _require(0.0 <= args.gamma <= 1.0, f"--gamma must lie in [0, 1], got {args.gamma}")
    _require(0.0 <= args.alpha <= 1.0, f"--alpha must lie in [0, 1], got {args.alpha}")
    return QiupConfig(p1=args.p1, pump_coherence=args.gamma,
                      alignment_overlap=args.alpha, fringe_phase=args.fringe_phase)


def cmd_calibrate(args) -> int:
    _require(args.photons >= 1, "--photons must be >= 1")
    cfg = _config_from_args(args)
    cal = calibrate_no_object(cfg, args.photons, args.seed,
                              grid_size=args.grid_size, noiseless=args.noiseless)
    print(f"{cal.alpha_gamma_hat:.17g}")
    if args.out:
        with open(args.out, "w", encoding="ascii", newline="\n") as fh:
            fh.write(f"alpha_gamma_hat={cal.alpha_gamma_hat:.17g}\n")
            fh.write(f"photons_used={cal.photons_used}\n")
            fh.write(f"seed={cal.seed}\n")
    return 0


def cmd_synth(args) -> int:
    _require(args.width >= 16 and args.height >= 16, "dimensions must be >= 16")
    _require(args.edge_softness > 0, "--edge-softness must be > 0")
    tmap = synth_letter_object(args.width, args.height, args.glyph, args.edge_softness)
    save_map(tmap, args.out, fmt=args.format)
    print(f"wrote {tmap.width}x{tmap.height} '{args.glyph}' object to {args.out}")
    return 0


def cmd_reconstruct(args) -> int:
    _require(args.budget >= 1, "--budget must be >= 1")
    _require(args.grid_size >= 8, "--grid-size must be >= 8")
    cfg = _config_from_args(args)
    truth = load_map(args.object)
    report = reconstruct(truth, cfg, args.budget, grid_size=args.grid_size,
                         master_seed=args.seed, noiseless=args.noiseless,
                         calibrated=not args.no_calibration,
                         calibration_photons=args.calibration_photons,
                         workers=args.workers)
    write_report_dir(report, args.out_dir, truth=truth, figures=not args.no_fig)
    print(f"rmse={report.rmse:.17g}")
    print(f"out_dir={args.out_dir}")
    return 0


def cmd_report(args) -> int:
    data = read_report_dir(args.run_dir)
    for key, value in data["summary"].items():
        if isinstance(value, float):
            print(f"{key}={value:.17g}")
        elif isinstance(value, bool):
            print(f"{key}={'true' if value else 'false'}")
        else:
            print(f"{key}={value}")
    if not args.no_fig and "reconstruction" in data and "ellipticity" in data:
        from .figures import save_reconstruction_figure
        save_reconstruction_figure(data["reconstruction"], data["ellipticity"],
                                   os.path.join(args.run_dir, "overview.png"),
                                   truth=data.get("truth"),
                                   rmse_value=data["summary"].get("rmse"))
    return 0


# -----------------------------
# Config-file merging and entry point
# -----------------------------

def _load_config_flags(path) -> list:
    """Turn a key=value file into a flag list (booleans: true -> bare flag)."""
    flags = []
    try:
        with open(path, "r", encoding="ascii") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise UsageError(f"{path}:{lineno}: expected key=value, got {line!r}")
                key, value = (part.strip() for part in line.split("=", 1))
                flag = "--" + key.replace("_", "-")
                if value.lower() in ("true", "false"):
                    if value.lower() == "true":
                        flags.append(flag)
                else:
                    flags.extend([flag, value])
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from None
    return flags


def _extract_config_path(argv):
    for i, token in enumerate(argv):
        if token == "--config" and i + 1 < len(argv):
            return argv[i + 1]
        if token.startswith("--config="):
            return token.split("=", 1)[1]
    return None


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        # config values become defaults: insert them right after the
        # subcommand so explicitly given flags (later in argv) win
        config_path = _extract_config_path(argv)
        if config_path and argv and not argv[0].startswith("-"):
            argv = [argv[0]] + _load_config_flags(config_path) + argv[1:]
        args = parser.parse_args(argv)
        if not getattr(args, "command", None):
            parser.print_usage(sys.stderr)
            return 1
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except MapFormatError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except DualityError as exc:
        print(f"physics error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
