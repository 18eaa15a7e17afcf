"""Command-line entry point: ``qpam-pnc <subcommand> ...``.

Exit codes: 0 success, 2 configuration error, 3 unreachable SER target.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import json
import math
import sys

from .constellation import as_ratio, build_constellation
from .curve import CURVE_HEADER, TURNING_HEADER, curve_rows, turning_rows
from .gf import ConfigurationError
from .ncmap import d_min, nc_map_array, optimal_ab_bruteforce, optimal_ab_closed, ser_bound
from .presets import DEFAULT_TRIALS, PRESETS, reproduce
from .sim import (
    SER_HEADER,
    UnreachableTarget,
    make_config,
    parse_pair,
    parse_sweep,
    read_config,
    required_snr,
    run_ser,
    ser_rows,
)

EXIT_CONFIG = 2
EXIT_UNREACHABLE = 3


@contextlib.contextmanager
def _sink(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _emit(args, header, rows):
    """CSV by default; ``--json`` writes the same fields as a list of objects."""
    with _sink(getattr(args, "out", None)) as fh:
        if getattr(args, "json", False):
            json.dump([dict(zip(header, r)) for r in rows], fh, indent=2)
            fh.write("\n")
        else:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)


def cmd_curve(args):
    _emit(args, CURVE_HEADER, curve_rows(args.q, args.eta_max))


def cmd_turning_points(args):
    _emit(args, TURNING_HEADER, turning_rows(args.q))


def cmd_optimal_ab(args):
    c = build_constellation(args.q, args.eta)
    opt = optimal_ab_bruteforce(c)
    res = opt.result
    record = {
        "q": args.q,
        "eta": str(c.eta),
        "alpha": opt.pair.alpha,
        "beta": opt.pair.beta,
        "d_min": str(res.d_min),
        "a_min": res.a_min,
        "classes": [list(p) for p in sorted(opt.classes(args.q))],
        "closed_form": list(optimal_ab_closed(args.q, c.eta)),
        "witnesses": [[list(s) for s in w] for w in res.witnesses],
    }
    if args.json:
        json.dump(record, sys.stdout, indent=2)
        sys.stdout.write("\n")
        return
    for k in ("q", "eta", "alpha", "beta", "d_min", "a_min"):
        print(f"{k}: {record[k]}")
    print("classes: " + " ".join(f"({a},{b})" for a, b in record["classes"]))
    print("closed_form: ({},{})".format(*record["closed_form"]))
    print("witnesses: " + " ".join(f"{tuple(a)}-{tuple(b)}" for a, b in record["witnesses"]))


def _sim_config(args):
    file_values = read_config(args.config) if args.config else {}
    return make_config(
        file_values, q=args.q, eta=args.eta, h_a=args.h_a, h_b=args.h_b, snr_db=args.snr,
        mode=args.mode, rule=args.rule, clustering=args.clustering, misalignment=args.D,
        block_len=args.block_len, trials=args.trials, seed=args.seed, output=args.out)


def cmd_ser(args):
    cfg = _sim_config(args)
    args.out = cfg.output
    _emit(args, SER_HEADER, ser_rows(run_ser(cfg)))


def cmd_required_snr(args):
    cfg = _sim_config(args)
    r = required_snr(cfg, args.target, args.lo, args.hi)
    args.out = cfg.output
    _emit(args, ["required_snr_db", "bracket_lo", "bracket_hi", "saturated"],
          [[f"{r.snr_db:.4f}", f"{r.bracket[0]:.4f}", f"{r.bracket[1]:.4f}", int(r.saturated)]])


def cmd_bound(args):
    c = build_constellation(args.q, args.eta)
    pair = parse_pair(args.pair).validate(args.q) if args.pair else optimal_ab_bruteforce(c).pair
    res = d_min(c, pair)
    rows = []
    for snr in parse_sweep(args.snr):
        rho = 10 ** (snr / 10)
        b = ser_bound(args.q, rho, res)
        rows.append([f"{snr:g}", f"{rho:.6g}", pair.alpha, pair.beta, str(res.d_min), res.a_min,
                     f"{b.value:.6e}", int(b.vacuous)])
    _emit(args, ["snr_db", "rho", "alpha", "beta", "d_min", "a_min", "bound", "vacuous"], rows)


def cmd_reproduce(args):
    for path in reproduce(args.figure_id, args.outdir, args.trials):
        print(path)


def cmd_dump_constellation(args):
    c = build_constellation(args.q, args.eta)
    labels = nc_map_array(parse_pair(args.pair).validate(args.q), c.w_a, c.w_b, args.q) \
        if args.pair else None
    rows = []
    for i, (s, w_s) in enumerate(c.points()):
        w_s = as_ratio(w_s)
        num, den = (w_s.numerator, w_s.denominator) if c.exact else (repr(w_s), 1)
        rows.append([s.w_a, s.w_b, num, den, "" if labels is None else int(labels[i])])
    _emit(args, ["w_A", "w_B", "w_S_num", "w_S_den", "nc_symbol"], rows)


def _ratio(text):
    try:
        return as_ratio(text)
    except ConfigurationError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qpam-pnc", description="q-PAM physical-layer network coding toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    def out_opts(sp):
        sp.add_argument("--out", help="output file (default stdout)")
        sp.add_argument("--json", action="store_true", help="emit JSON instead of CSV")

    sp = sub.add_parser("curve", help="piecewise-linear d_min / l_min knots")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--eta-max", type=_ratio, default=None)
    out_opts(sp)
    sp.set_defaults(func=cmd_curve)

    sp = sub.add_parser("turning-points", help="even and odd turning points")
    sp.add_argument("--q", type=int, required=True)
    out_opts(sp)
    sp.set_defaults(func=cmd_turning_points)

    sp = sub.add_parser("optimal-ab", help="d_min-optimal NC coefficients")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--eta", type=_ratio, required=True)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_optimal_ab)

    for name, func in (("ser", cmd_ser), ("required-snr", cmd_required_snr)):
        sp = sub.add_parser(name, help="Monte Carlo SER" if name == "ser" else "SNR for a target SER")
        sp.add_argument("--config", help="flat key = value file; flags override it")
        sp.add_argument("--q", type=int)
        sp.add_argument("--eta")
        sp.add_argument("--h-a", type=float)
        sp.add_argument("--h-b", type=float)
        sp.add_argument("--snr", help="start:stop:step in dB, or a comma list")
        sp.add_argument("--mode", choices=["sync", "async"])
        sp.add_argument("--rule", choices=["md", "ml", "bp"])
        sp.add_argument("--clustering", help="auto | left | right | alpha,beta")
        sp.add_argument("--D", type=float, help="misalignment in symbol periods (async)")
        sp.add_argument("--block-len", type=int)
        sp.add_argument("--trials", type=int)
        sp.add_argument("--seed", type=int)
        out_opts(sp)
        if name == "required-snr":
            sp.add_argument("--target", type=float, default=1e-3)
            sp.add_argument("--lo", type=float, default=0.0)
            sp.add_argument("--hi", type=float, default=50.0)
        sp.set_defaults(func=func)

    sp = sub.add_parser("bound", help="high-SNR SER bound over an SNR sweep")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--eta", type=_ratio, required=True)
    sp.add_argument("--pair", help="alpha,beta (default: brute-force optimum)")
    sp.add_argument("--snr", default="0:40:2")
    out_opts(sp)
    sp.set_defaults(func=cmd_bound)

    sp = sub.add_parser("reproduce", help="figure presets")
    sp.add_argument("figure_id", choices=PRESETS)
    sp.add_argument("--outdir", default="results")
    sp.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    sp.set_defaults(func=cmd_reproduce)

    sp = sub.add_parser("dump-constellation", help="superimposed constellation as CSV")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--eta", type=_ratio, required=True)
    sp.add_argument("--pair", help="alpha,beta to fill the nc_symbol column")
    out_opts(sp)
    sp.set_defaults(func=cmd_dump_constellation)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except UnreachableTarget as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNREACHABLE
    except (ConfigurationError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return 0


if __name__ == "__main__":
    sys.exit(main())
