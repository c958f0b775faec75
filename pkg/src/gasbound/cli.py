"""Command-line entry point.

Subcommands ``constants``, ``threshold``, ``sweep``, ``vk``, ``delta`` and
``verify`` print machine-readable results on standard output (or to
``--output``) and log to standard error.  Exit codes: 0 success, 1
computational failure, 2 failed verification check, 64 usage or
configuration error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .connective import CONVENTIONS, delta_phi_upper, vk_monte_carlo, vk_quadrature_1d
from .constants import temperedness_constants
from .potentials import ConfigError, PairPotential, ThermoState, load_potential
from .threshold import SWEEP_COLUMNS, analyticity_threshold, sweep

logger = logging.getLogger("gasbound")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CHECK_FAILED = 2
EXIT_USAGE = 64

ALL_CHECKS = ("logz", "recursion", "correspondence", "selfmap", "contraction", "zerofree")
# keys that change where output goes but not what is computed
_UNHASHED = {"output", "log_level", "func"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


# --------------------------------------------------------------------------
# argument types


def _count(text: str) -> int:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not x.is_integer() or x < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return int(x)


def _delta(text: str):
    if text in ("auto", "cphi"):
        return text
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError("--delta takes 'auto', 'cphi' or a positive number")
    if not x > 0:
        raise argparse.ArgumentTypeError("--delta must be positive")
    return x


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}")


def _checks(text: str):
    names = [s.strip() for s in text.split(",") if s.strip()]
    bad = [n for n in names if n not in ALL_CHECKS]
    if bad or not names:
        raise argparse.ArgumentTypeError(f"unknown checks {bad}; choose from {','.join(ALL_CHECKS)}")
    return names


def _positive(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not x > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return x


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--potential", required=True, help="potential declaration file")
    common.add_argument("--beta", type=_positive, default=1.0, help="inverse temperature (default 1)")
    common.add_argument("--seed", type=int, default=42, help="random seed (default 42)")
    common.add_argument("--format", choices=("json", "csv"), default=None, help="output format")
    common.add_argument("--output", default=None, help="write results here instead of standard output")
    common.add_argument("--log-level", default="WARNING", help="logging level on standard error")

    mc = _Parser(add_help=False)
    mc.add_argument("--samples", type=_count, default=10**6, help="Monte Carlo samples per depth")
    mc.add_argument("--convention", choices=CONVENTIONS, default="trailing")
    mc.add_argument("--method", choices=("mc", "quadrature"), default="mc",
                    help="Monte Carlo, or deterministic quadrature (1D, k <= 3)")

    parser = _Parser(prog="gasbound", description="Analyticity thresholds for hard-core gases.")
    parser.add_argument("--version", action="version", version=f"gasbound {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("constants", parents=[common], help="temperedness constants")
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("threshold", parents=[common, mc], help="analyticity threshold")
    p.add_argument("--delta", type=_delta, default="auto",
                   help="'auto' (walk-integral estimate), 'cphi', or a value")
    p.add_argument("--kmax", type=_count, default=3, help="largest depth used by --delta auto")
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("sweep", parents=[common, mc], help="threshold over a beta grid (CSV)")
    p.add_argument("--beta-min", type=_positive, required=True)
    p.add_argument("--beta-max", type=_positive, required=True)
    p.add_argument("--steps", type=_count, required=True)
    p.add_argument("--delta", type=_delta, default="cphi")
    p.add_argument("--kmax", type=_count, default=3)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("vk", parents=[common, mc], help="walk integral V_k")
    p.add_argument("--k", type=_count, default=1)
    p.set_defaults(func=cmd_vk)

    p = sub.add_parser("delta", parents=[common, mc], help="upper estimate of the connective constant")
    p.add_argument("--kmax", type=_count, default=3)
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("verify", parents=[common], help="identity checks against the 1D oracle")
    p.add_argument("--lambda", dest="lam", type=_complex, default=0.2, help="activity (complex allowed)")
    p.add_argument("--volume", type=_positive, default=1.5, help="length of the box [0, L]")
    p.add_argument("--point", type=float, default=None, help="evaluation point (default L/2)")
    p.add_argument("--checks", type=_checks, default=list(ALL_CHECKS))
    p.add_argument("--trials", type=_count, default=None,
                   help="random setups for selfmap (default 100) and contraction (default 200)")
    p.set_defaults(func=cmd_verify)
    return parser


# --------------------------------------------------------------------------
# helpers


def config_hash(args: argparse.Namespace, potential_text: str) -> str:
    """SHA-256 over the computation-relevant arguments and the potential file."""
    items = {k: v for k, v in vars(args).items() if k not in _UNHASHED}
    items["potential"] = potential_text
    blob = json.dumps(items, sort_keys=True, default=str)
    return hashlib.sha256(blob.encode()).hexdigest()


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, (np.floating, np.integer, np.bool_)):
        return x.item()
    if isinstance(x, float) and not math.isfinite(x):
        return None if math.isnan(x) else ("inf" if x > 0 else "-inf")
    return x


def _stamp(obj: dict, meta: dict) -> dict:
    return {**_jsonable(obj), **meta}


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _flat_csv(objs) -> str:
    header = list(objs[0].keys())
    rows = [[json.dumps(o.get(h)) if isinstance(o.get(h), (list, dict)) else o.get(h) for h in header]
            for o in objs]
    return _csv_text(header, rows)


def _emit(text: str, args):
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_objects(objs, args, single: bool):
    if (args.format or "json") == "csv":
        _emit(_flat_csv(objs), args)
    else:
        payload = objs[0] if single else objs
        _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", args)


def _walk_estimates(p, t, args, k_max):
    out = []
    for k in range(1, k_max + 1):
        if args.method == "quadrature":
            out.append(vk_quadrature_1d(p, t, k, convention=args.convention))
        else:
            out.append(vk_monte_carlo(p, t, k, args.samples, seed=args.seed, convention=args.convention))
    return out


def _auto_delta(p, t, k, args) -> float:
    """Walk-integral upper estimate plus three standard errors, capped at ``C_phi``."""
    est = delta_phi_upper(_walk_estimates(p, t, args, args.kmax), k.a_phi, args.kmax)
    delta = min(est.delta_hat + 3 * est.std_error, k.c_phi)
    logger.info("auto delta = %.8g (k=%d, %s)", delta, est.witnessing_k, est.convention)
    return max(delta, k.a_phi)


# --------------------------------------------------------------------------
# subcommands


def cmd_constants(p: PairPotential, args, meta) -> int:
    k = temperedness_constants(p, ThermoState(args.beta))
    _emit_objects([_stamp(k.as_dict(), meta)], args, single=True)
    return EXIT_OK


def cmd_threshold(p: PairPotential, args, meta) -> int:
    t = ThermoState(args.beta)
    k = temperedness_constants(p, t)
    if args.delta == "auto":
        delta = _auto_delta(p, t, k, args)
    elif args.delta == "cphi":
        delta = k.c_phi
    else:
        delta = args.delta
    rep = analyticity_threshold(k, delta, t.beta * p.local_stability_unit)
    out = rep.as_dict()
    out["constants"] = k.as_dict()
    _emit_objects([_stamp(out, meta)], args, single=True)
    return EXIT_OK


def cmd_sweep(p: PairPotential, args, meta) -> int:
    if args.beta_max < args.beta_min or (args.steps > 1 and args.beta_max == args.beta_min):
        raise UsageError("need beta-min < beta-max (or --steps 1 with equal bounds)")
    betas = np.linspace(args.beta_min, args.beta_max, args.steps) if args.steps > 1 else [args.beta_min]
    if args.delta == "auto":
        policy = lambda pot, t, k: _auto_delta(pot, t, k, args)
    else:
        policy = args.delta
    rows = sweep(p, policy, betas)
    if (args.format or "csv") == "csv":
        _emit(_csv_text(SWEEP_COLUMNS, [r.values() for r in rows]), args)
    else:
        objs = []
        for r in rows:
            o = dict(zip(SWEEP_COLUMNS, r.values()))
            o["error"] = r.error
            objs.append(_stamp(o, meta))
        _emit(json.dumps(objs, indent=2, sort_keys=True) + "\n", args)
    return EXIT_FAILURE if any(r.error for r in rows) else EXIT_OK


def cmd_vk(p: PairPotential, args, meta) -> int:
    t = ThermoState(args.beta)
    if args.method == "quadrature":
        est = vk_quadrature_1d(p, t, args.k, convention=args.convention)
    else:
        est = vk_monte_carlo(p, t, args.k, args.samples, seed=args.seed, convention=args.convention)
    _emit_objects([_stamp(est.as_dict(), meta)], args, single=True)
    return EXIT_OK


def cmd_delta(p: PairPotential, args, meta) -> int:
    t = ThermoState(args.beta)
    k = temperedness_constants(p, t)
    est = delta_phi_upper(_walk_estimates(p, t, args, args.kmax), k.a_phi, args.kmax)
    out = est.as_dict()
    out.update(c_phi=k.c_phi, a_phi=k.a_phi, k_max=args.kmax)
    _emit_objects([_stamp(out, meta)], args, single=True)
    return EXIT_OK


def cmd_verify(p: PairPotential, args, meta) -> int:
    from .oracle import ActivityField, Region1D
    from .oracle import checks as ck

    if p.dimension != 1:
        raise UsageError("verify runs on one-dimensional potentials only")
    t = ThermoState(args.beta)
    L = args.volume
    dom = Region1D.interval(0.0, L)
    v = L / 2 if args.point is None else args.point
    a = ActivityField(p, t, args.lam, support=dom)
    results = []
    for name in args.checks:
        logger.info("running check %s", name)
        if name == "logz":
            results.append(ck.check_log_z_identity(a, dom).as_dict())
        elif name == "recursion":
            results.append(ck.check_recursion_identity(a, dom, v).as_dict())
        elif name == "correspondence":
            for k in (1, 2):
                results.append(ck.check_density_correspondence(a, dom, k, v).as_dict())
        elif name == "selfmap":
            r = ck.check_self_map(p, t, dom, trials=args.trials or 100, seed=args.seed)
            results.append(r.as_dict())
        elif name == "contraction":
            r = ck.check_contraction_bound(p, t, dom, trials=args.trials or 200, seed=args.seed)
            results.append(r.as_dict())
        elif name == "zerofree":
            k = temperedness_constants(p, t)
            lam_star = analyticity_threshold(k, k.c_phi, t.beta * p.local_stability_unit).new_threshold
            scan = ck.zero_free_scan(p, t, dom, lam_star)
            d = scan.as_dict()
            results.append({"check": "zerofree", "residual": float(len(scan.zeros_inside)),
                            "tolerance": 0.0, "pass": scan.zero_free, **d})
    objs = [_stamp(r, meta) for r in results]
    _emit(json.dumps(objs, indent=2, sort_keys=True) + "\n", args)
    failed = [r["check"] for r in results if not r["pass"]]
    if failed:
        logger.warning("failed checks: %s", ", ".join(failed))
        return EXIT_CHECK_FAILED
    return EXIT_OK


# --------------------------------------------------------------------------


def run(argv=None) -> int:
    """Parse ``argv`` and run one subcommand; returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"gasbound: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    level = getattr(logging, str(args.log_level).upper(), None)
    if not isinstance(level, int):
        print(f"gasbound: error: bad --log-level {args.log_level!r}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    try:
        text = Path(args.potential).read_text()
        p = load_potential(args.potential)
    except (OSError, ConfigError) as exc:
        print(f"gasbound: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    meta = {"config_hash": config_hash(args, text), "version": __version__}
    try:
        return args.func(p, args, meta)
    except UsageError as exc:
        print(f"gasbound: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        logger.debug("traceback", exc_info=True)
        return EXIT_FAILURE


def main() -> None:
    sys.exit(run())
