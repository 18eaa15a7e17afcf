"""Figure-reproduction presets. Each writes ``<id>.csv`` and a whitespace
``<id>.dat`` (blank-line separated blocks, gnuplot ``index`` friendly)."""

from __future__ import annotations

import csv
import os
from fractions import Fraction

from .constellation import build_constellation
from .curve import CURVE_HEADER, TURNING_HEADER, curve_rows, turning_points, turning_rows
from .ncmap import clustering_candidates_at_trough, d_min
from .sim import SimConfig, UnreachableTarget, bound_required_snr, parse_sweep, required_snr, run_ser

PRESET_SEED = 20240101
DEFAULT_TRIALS = 200_000

PRESETS = ("dmin-curve-7pam", "dmin-curves-5-7-11", "required-snr-7pam", "ser-5pam", "ser-7pam")


def _write(outdir, name, header, rows, blocks):
    os.makedirs(outdir, exist_ok=True)
    csv_path = os.path.join(outdir, f"{name}.csv")
    with open(csv_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    dat_path = os.path.join(outdir, f"{name}.dat")
    with open(dat_path, "w") as fh:
        for title, cols, data in blocks:
            fh.write(f"# {title}\n# {' '.join(cols)}\n")
            for r in data:
                fh.write(" ".join(str(x) for x in r) + "\n")
            fh.write("\n\n")
    return [csv_path, dat_path]


def _curve_block(q, eta_max):
    rows = curve_rows(q, eta_max)
    data = [(r[2], f"{r[3] / r[4]:.12g}", f"{r[5] / r[6]:.12g}") for r in rows]
    return rows, (f"q={q}", ["eta", "d_min", "l_min"], data)


def _dmin_curve_7pam(outdir, trials):
    rows, block = _curve_block(7, 3)
    tp = turning_rows(7)
    tp_block = ("turning points q=7", ["eta", "d_min", "parity"],
                [(f"{r[2] / r[3]:.12g}", f"{r[4] / r[5]:.12g}", r[1]) for r in tp if r[2] / r[3] <= 3])
    paths = _write(outdir, "dmin-curve-7pam", CURVE_HEADER, rows, [block, tp_block])
    tp_path = os.path.join(outdir, "dmin-curve-7pam-turning-points.csv")
    with open(tp_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TURNING_HEADER)
        w.writerows(tp)
    return paths + [tp_path]


def _dmin_curves_5_7_11(outdir, trials):
    rows, blocks = [], []
    for q in (5, 7, 11):
        r, b = _curve_block(q, 3)
        rows += [[q] + x for x in r]
        blocks.append(b)
    return _write(outdir, "dmin-curves-5-7-11", ["q"] + CURVE_HEADER, rows, blocks)


def _required_snr_7pam(outdir, trials):
    q, target = 7, 1e-3
    etas = sorted({Fraction(100 + 2 * k, 100) for k in range(1, 16)}
                  | {t.eta for t in turning_points(q) if t.parity == "odd" and t.eta <= Fraction(13, 10)})
    header = ["eta_num", "eta_den", "eta_float", "side", "alpha", "beta", "d_min", "a_min",
              "required_snr_db", "bound_snr_db", "saturated"]
    rows, blocks = [], {"left": [], "right": []}
    for eta in etas:
        c = build_constellation(q, eta)
        try:
            cands = clustering_candidates_at_trough(c)
        except ValueError:
            continue  # overlap: only one side is meaningful
        for side, pair in cands.items():
            dm = d_min(c, pair)
            cfg = SimConfig(q=q, eta=str(eta), clustering=side, trials=trials, seed=PRESET_SEED)
            try:
                r = required_snr(cfg, target, lo_db=10.0, hi_db=50.0)
                snr, sat = f"{r.snr_db:.3f}", int(r.saturated)
            except UnreachableTarget:
                snr, sat = "nan", 1
            bound = bound_required_snr(q, dm.d_min, dm.a_min, target)
            rows.append([eta.numerator, eta.denominator, f"{float(eta):.6g}", side, pair.alpha,
                         pair.beta, str(dm.d_min), dm.a_min, snr, f"{bound:.3f}", sat])
            blocks[side].append((f"{float(eta):.6g}", snr, f"{bound:.3f}"))
    return _write(outdir, "required-snr-7pam", header, rows,
                  [(f"{s} clustering", ["eta", "required_snr_db", "bound_snr_db"], b)
                   for s, b in blocks.items()])


def _ser(outdir, trials, q, etas, name):
    sweep = parse_sweep("0:30:2")
    header = ["mode", "rule", "eta", "snr_db", "errors", "symbols", "ser", "ci_low", "ci_high"]
    rows, blocks = [], []
    for mode, rule in (("sync", "md"), ("async", "bp")):
        for eta in etas:
            cfg = SimConfig(q=q, eta=eta, snr_db=sweep, mode=mode, rule=rule, trials=trials,
                            seed=PRESET_SEED)
            est = run_ser(cfg)
            data = []
            for e in est:
                rows.append([mode, rule, eta, f"{e.snr_db:g}", e.errors, e.symbols,
                             f"{e.ser:.6e}", f"{e.ci_low:.6e}", f"{e.ci_high:.6e}"])
                data.append((f"{e.snr_db:g}", f"{e.ser:.6e}"))
            blocks.append((f"{mode}/{rule} eta={eta}", ["snr_db", "ser"], data))
    return _write(outdir, name, header, rows, blocks)


def _ser_5pam(outdir, trials):
    return _ser(outdir, trials, 5, ["1", "5/4", "7/5"], "ser-5pam")


def _ser_7pam(outdir, trials):
    return _ser(outdir, trials, 7, ["1", "7/6", "11/9"], "ser-7pam")


_RUNNERS = {
    "dmin-curve-7pam": _dmin_curve_7pam,
    "dmin-curves-5-7-11": _dmin_curves_5_7_11,
    "required-snr-7pam": _required_snr_7pam,
    "ser-5pam": _ser_5pam,
    "ser-7pam": _ser_7pam,
}


def reproduce(figure_id: str, outdir: str = "results", trials: int = DEFAULT_TRIALS) -> list:
    """Run a preset and return the written file paths.

    Monte Carlo presets use seed ``PRESET_SEED`` and ``trials`` symbols per point.
    """
    from .gf import ConfigurationError

    if figure_id not in _RUNNERS:
        raise ConfigurationError(f"unknown preset {figure_id!r}; choose from {', '.join(PRESETS)}")
    return _RUNNERS[figure_id](outdir, trials)
