"""Command line entry point: ``transduction <command>`` or ``python -m transduction``.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
import time

from .errors import ConsistencyError, DomainError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _resolve_config(path):
    """Accept ``figures/fig2a``, ``figures/fig2a.json`` or just ``fig2a``."""
    candidates = [path, path + ".json",
                  os.path.join("figures", path), os.path.join("figures", path + ".json")]
    for c in candidates:
        if os.path.isfile(c):
            return c
    raise UsageError(f"config not found: {path}")


def _parity(text):
    table = {"+": 1, "+1": 1, "1": 1, "even": 1, "-": -1, "-1": -1, "odd": -1}
    if text not in table:
        raise argparse.ArgumentTypeError(f"parity must be + or -, got {text!r}")
    return table[text]


def _device_args(p, c_default=0.1):
    p.add_argument("--c", type=float, default=c_default, help="cooperativity C")
    p.add_argument("--zeta-o", type=float, default=1.0, help="optical extraction efficiency")
    p.add_argument("--zeta-m", type=float, default=1.0, help="microwave extraction efficiency")
    p.add_argument("--n-in", type=float, default=0.0, help="microwave thermal occupation")


def _device(args):
    from .device import DeviceParams
    return DeviceParams(args.c, args.zeta_o, args.zeta_m, args.n_in)


def build_parser():
    ap = argparse.ArgumentParser(prog="transduction",
                                 description="Capacity, fidelity and GKP figures of merit for "
                                             "direct and teleportation-based transduction.")
    ap.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="evaluate a figure config over its parameter grid")
    p.add_argument("--config", required=True, help="JSON sweep spec (e.g. figures/fig2a)")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--workers", type=int, default=1, help="worker processes")
    p.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                   help="override a config field, e.g. n_in=0 or axes.C.count=50")

    p = sub.add_parser("verify", help="run the oracle cross-checks")
    p.add_argument("--grid", choices=("coarse", "full"), default="coarse")

    p = sub.add_parser("threshold", help="cooperativity above which direct conversion has eta > 1/2")
    p.add_argument("--zeta-o", type=float, required=True)
    p.add_argument("--zeta-m", type=float, required=True)

    p = sub.add_parser("capacity", help="quantum-capacity bounds at one device point")
    p.add_argument("--scheme", choices=("dc", "tp"), required=True)
    _device_args(p)

    p = sub.add_parser("fidelity", help="coherent or cat state transfer fidelity")
    p.add_argument("--state", choices=("coherent", "cat"), required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--parity", type=_parity, default=1, help="cat parity, + or -")
    p.add_argument("--scheme", choices=("dc", "tp", "both"), default="both")
    p.add_argument("--kappa", type=float, help="fixed teleportation gain (default: optimised)")
    _device_args(p)

    p = sub.add_parser("gkp", help="GKP error-correction success probability")
    p.add_argument("--sigma2", type=float, required=True, help="additive noise variance")
    p.add_argument("--sigma-gkp", type=float, required=True, help="GKP squeezing noise")
    return ap


# ---------------------------------------------------------------------------


def cmd_sweep(args):
    from .sweep import load_spec, run_sweep

    spec = load_spec(_resolve_config(args.config), args.overrides)
    if args.workers < 1:
        raise UsageError("--workers must be >= 1")
    t0 = time.perf_counter()
    table = run_sweep(spec, workers=args.workers)
    text = table.to_csv() if args.format == "csv" else table.to_json()
    if args.out:
        os.makedirs(os.path.dirname(os.path.abspath(args.out)), exist_ok=True)
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        logging.info("wrote %d rows to %s in %.2f s", len(table.rows), args.out,
                     time.perf_counter() - t0)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args):
    from .verify import run_checks

    results = run_checks(args.grid)
    for r in results:
        print(r.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_FAIL if failed else EXIT_OK


def cmd_threshold(args):
    from .channels import dc_threshold

    c = dc_threshold(args.zeta_o, args.zeta_m)
    if c is None:
        print("none: zeta_o * zeta_m <= 1/2, direct conversion never exceeds eta = 1/2")
    else:
        print(f"C_th = {c:.12g}")
    return EXIT_OK


def cmd_capacity(args):
    from .capacity import dc_bounds, tp_bounds

    p = _device(args)
    b = dc_bounds(p) if args.scheme == "dc" else tp_bounds(p)
    print(f"q_lower = {b.q_lower:.12g}")
    print(f"q_upper = {b.q_upper:.12g}")
    if b.kappa_star is not None:
        print(f"kappa*  = {b.kappa_star:.12g}")
    return EXIT_OK


def cmd_fidelity(args):
    from .device import entanglement_cm
    from .transfer import (SchemeNoiseParams, fidelity_cat, fidelity_coherent, tp_fidelity_cat,
                           tp_fidelity_coherent)

    p = _device(args)
    closed = (lambda n: fidelity_coherent(n, args.alpha)) if args.state == "coherent" else \
        (lambda n: fidelity_cat(n, args.alpha, args.parity))
    if args.scheme in ("dc", "both"):
        print(f"dc: F = {closed(SchemeNoiseParams.dc(p)):.12g}")
    if args.scheme in ("tp", "both"):
        cm = entanglement_cm(p)
        if args.kappa is not None:
            k, f = args.kappa, closed(SchemeNoiseParams.tp(cm, args.kappa))
        elif args.state == "coherent":
            k, f = tp_fidelity_coherent(cm, args.alpha)
        else:
            k, f = tp_fidelity_cat(cm, args.alpha, args.parity)
        print(f"tp: F = {f:.12g} at kappa = {k:.12g}")
    return EXIT_OK


def cmd_gkp(args):
    from .transfer import GkpSpec, gkp_success, squeezing_db

    spec = GkpSpec(args.sigma_gkp)
    print(f"P_s = {gkp_success(args.sigma2, spec):.12g}")
    if 0 < args.sigma_gkp < 1:
        print(f"squeezing = {squeezing_db(spec):.4g} dB")
    return EXIT_OK


COMMANDS = {"sweep": cmd_sweep, "verify": cmd_verify, "threshold": cmd_threshold,
            "capacity": cmd_capacity, "fidelity": cmd_fidelity, "gkp": cmd_gkp}


def main(argv=None):
    from .sweep import SpecError

    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (UsageError, SpecError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConsistencyError as exc:
        print(f"internal consistency check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
