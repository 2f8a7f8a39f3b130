"""Command-line front end.

    modvar moments --slits 2 --separation 5 --width 1
    modvar sweep --m-start 2 --m-end 40 --step 2 --separation 5
    modvar verify [--suite product-sum ...]
    modvar fringe-data --slits 8 --k-range -10 10 --points 2001
    modvar commutator --state psi-2 --resolution fine --profile r.csv

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numerical
failure. JSON goes to stdout (or --output); verify writes its text summary
to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import __version__, gridlab, moments
from .aperture import MomentumEvaluator, SlitConfig, is_power_of_two
from .errors import ConfigError, GridError, QuadratureError
from .verify import SUITES, run_suites

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

UNITS = {
    "hbar": 1,
    "length": "user units",
    "wavenumber": "inverse user units",
}

SWEEP_COLUMNS = ["m", "sdev_qt", "sdev_pmod", "sdev_pmod_refined", "product", "product_refined"]
RESOLUTIONS = {"coarse": 64, "medium": 128, "fine": 256}


class UsageError(Exception):
    pass


def fmt(x) -> str:
    """17 significant digits, locale independent."""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return "%.17g" % float(x)


def write_csv(rows, header, out):
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])


def emit(text: str, path: str | None):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def dump_json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=False, allow_nan=False) + "\n"


def _input_config(args) -> dict:
    skip = {"func", "output", "profile"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def cmd_moments(args) -> int:
    cfg = SlitConfig(args.width, args.separation, args.slits)
    cfg.require_multislit()
    qt = moments.sdev_qt(cfg)
    pm = moments.sdev_pmod_single_fringe(cfg)
    pr = moments.sdev_pmod_refined(cfg)
    doc = {
        "config": _input_config(args),
        "units": UNITS,
        "m": cfg.slit_count_m,
        "T": cfg.separation_T,
        "a": cfg.slit_width_a,
        "sdev_qt": qt.value,
        "sdev_pmod": pm.value,
        "sdev_pmod_refined": pr.value,
        "product": qt.value * pm.value,
        "product_refined": qt.value * pr.value,
        "methods": {
            "sdev_qt": qt.method.value,
            "sdev_pmod": pm.method.value,
            "sdev_pmod_refined": pr.method.value,
        },
        "error_estimates": {
            "sdev_qt": qt.abs_error_estimate,
            "sdev_pmod": pm.abs_error_estimate,
            "sdev_pmod_refined": pr.abs_error_estimate,
        },
    }
    if args.refined:
        chk = moments.sdev_pmod_refined_quadrature(cfg)
        doc["methods"]["sdev_pmod_refined_check"] = chk.method.value
        doc["sdev_pmod_refined_check"] = chk.value
        doc["error_estimates"]["sdev_pmod_refined_check"] = chk.abs_error_estimate
    emit(dump_json(doc), args.output)
    return EXIT_OK


def cmd_sweep(args) -> int:
    for name in ("m_start", "m_end", "step"):
        v = getattr(args, name)
        if v % 2 or v < 2:
            raise UsageError(f"--{name.replace('_', '-')} must be even and >= 2, got {v}")
    if args.m_end < args.m_start:
        raise UsageError("--m-end must not be smaller than --m-start")
    rows = moments.sweep(args.separation, args.width,
                         range(args.m_start, args.m_end + 1, args.step))
    if args.format == "json":
        doc = {"config": _input_config(args), "units": UNITS,
               "rows": [r.as_dict() for r in rows]}
        emit(dump_json(doc), args.output)
    else:
        buf = io.StringIO()
        write_csv(([getattr(r, c) for c in SWEEP_COLUMNS] for r in rows), SWEEP_COLUMNS, buf)
        emit(buf.getvalue(), args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    suites = args.suite or list(SUITES)
    results = run_suites(suites)
    failed = [r for r in results if not r["passed"]]
    for r in results:
        tag = "PASS" if r["passed"] else "FAIL"
        sys.stderr.write(f"{tag}  {r['suite']:<12} {r['name']}: {r['detail']}\n")
    sys.stderr.write(f"{len(results) - len(failed)}/{len(results)} checks passed\n")
    if failed:
        sys.stderr.write("failed: " + ", ".join(r["name"] for r in failed) + "\n")
    doc = {"config": _input_config(args), "units": UNITS, "passed": not failed,
           "checks": results}
    emit(dump_json(doc), args.output)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_fringe_data(args) -> int:
    kmin, kmax = args.k_range
    if not (math.isfinite(kmin) and math.isfinite(kmax) and kmax > kmin):
        raise UsageError("--k-range needs KMIN < KMAX")
    if args.points < 2:
        raise UsageError("--points must be >= 2")
    m = args.slits
    if not is_power_of_two(m) or m < 2:
        raise UsageError(f"--slits must be a power of two >= 2 for the envelope overlay, got {m}")
    cfg = SlitConfig(args.width, args.separation, m)
    env_cfg = (SlitConfig.single_slit(args.width, args.separation) if m == 2
               else SlitConfig(args.width, args.separation, m // 2))
    k = np.linspace(kmin, kmax, args.points)
    intensity = MomentumEvaluator(cfg)(k) ** 2
    envelope = MomentumEvaluator(env_cfg, "product")(k) ** 2
    buf = io.StringIO()
    write_csv(zip(k, intensity, envelope), ["k", "intensity", "envelope_intensity"], buf)
    emit(buf.getvalue(), args.output)
    return EXIT_OK


def _parse_state(name: str, a: float, T: float) -> SlitConfig:
    if name == "single-slit":
        return SlitConfig.single_slit(a, T)
    if name.startswith("psi-"):
        try:
            m = int(name[4:])
        except ValueError:
            raise UsageError(f"unknown state {name!r}") from None
        return SlitConfig(a, T, m)
    raise UsageError(f"unknown state {name!r}; use psi-<m> or single-slit")


def _resolution(value: str) -> int:
    if value in RESOLUTIONS:
        return RESOLUTIONS[value]
    try:
        return int(value)
    except ValueError:
        raise UsageError(f"--resolution must be coarse, medium, fine or an integer, got {value!r}") from None


def cmd_commutator(args) -> int:
    cfg = _parse_state(args.state, args.width, args.separation)
    if args.refined:
        if cfg.is_single_slit:
            raise UsageError("--refined needs a multislit state")
        K = cfg.K_refined
    else:
        K = cfg.K
    per = _resolution(args.resolution)
    if args.k_max is None:
        # the same k range for every resolution and both K choices
        periods = math.ceil(args.span / K)
        kmin, kmax, n = gridlab.commensurate_grid(K, per, periods)
    else:
        if per < 2:
            raise GridError("resolution must be >= 2 points per period")
        dk = K / per
        steps = 2 * args.k_max / dk
        if abs(steps - round(steps)) > 1e-9 * steps:
            raise GridError(f"--k-max {args.k_max} is not a multiple of dk = K/{per}")
        kmin, kmax, n = -args.k_max, args.k_max, int(round(steps)) + 1
    state = gridlab.sample_momentum(cfg, kmin, kmax, n, shift=args.shift * K,
                                    max_spacing=K / 64)
    rep = gridlab.canonical_residual(state, K)
    doc = {"config": _input_config(args), "units": UNITS, "K": K, "dk": state.dk,
           "n_points": n, **rep.as_dict()}
    if args.profile:
        with open(args.profile, "w", encoding="utf-8", newline="") as fh:
            write_csv(zip(rep.k, rep.residual_profile), ["k", "abs_residual"], fh)
    emit(dump_json(doc), args.output)
    return EXIT_OK


def _add_slit_args(p, slits=True):
    if slits:
        p.add_argument("--slits", "-m", type=int, required=True, help="even slit count m")
    p.add_argument("--separation", "-T", type=float, default=5.0, help="slit separation T")
    p.add_argument("--width", "-a", type=float, default=1.0, help="slit width a")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="modvar", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("moments", help="standard deviations and products for one aperture")
    _add_slit_args(p)
    p.add_argument("--refined", action="store_true",
                   help="also cross-check the refined moment by quadrature")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("sweep", help="moments over a range of slit counts")
    p.add_argument("--m-start", type=int, default=2)
    p.add_argument("--m-end", type=int, required=True)
    p.add_argument("--step", type=int, default=2)
    _add_slit_args(p, slits=False)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the identity and invariant checks")
    p.add_argument("--suite", action="append", choices=list(SUITES),
                   help="restrict to a suite (repeatable)")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("fringe-data", help="plot-ready intensity and envelope columns")
    _add_slit_args(p)
    p.add_argument("--k-range", nargs=2, type=float, metavar=("KMIN", "KMAX"), required=True)
    p.add_argument("--points", type=int, default=2001)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_fringe_data)

    p = sub.add_parser("commutator", help="grid residual of [Q, P_mod] psi = i psi")
    p.add_argument("--state", default="psi-2", help="psi-<m> or single-slit")
    _add_slit_args(p, slits=False)
    p.add_argument("--resolution", default="fine",
                   help="coarse|medium|fine or grid points per period (even)")
    p.add_argument("--refined", action="store_true", help="use K' = 4 pi/(m T)")
    p.add_argument("--shift", type=float, default=0.0,
                   help="shift psi_hat by this fraction of K (breaks admissibility)")
    p.add_argument("--span", type=float, default=40 * math.pi,
                   help="half-width of the k range (rounded up to whole periods)")
    p.add_argument("--k-max", type=float, default=None,
                   help="exact half-width; must be a multiple of the grid spacing")
    p.add_argument("--profile", help="write k,|r(k)| to this CSV file")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_commutator)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ConfigError) as exc:
        sys.stderr.write(f"modvar {args.command}: error: {exc}\n")
        return EXIT_USAGE
    except (QuadratureError, GridError) as exc:
        sys.stderr.write(f"modvar {args.command}: numerical failure: {exc}\n")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
