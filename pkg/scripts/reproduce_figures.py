"""Run every figure preset into one output directory."""

import argparse

from qpam_pnc.presets import DEFAULT_TRIALS, PRESETS, reproduce


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--outdir", default="results")
    p.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    p.add_argument("--only", nargs="*", choices=PRESETS, default=PRESETS)
    args = p.parse_args()
    for figure_id in args.only:
        for path in reproduce(figure_id, args.outdir, args.trials):
            print(path)


if __name__ == "__main__":
    main()
