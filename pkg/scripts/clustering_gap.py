"""Required SNR for left vs right clustering near the first 7-PAM trough.

Prints the Monte Carlo required SNR next to the value implied by the
high-SNR bound, so the two sources of the left/right gap (distance and
multiplicity) can be read off separately.
"""

import argparse

from qpam_pnc.constellation import build_constellation
from qpam_pnc.ncmap import clustering_candidates_at_trough, d_min
from qpam_pnc.sim import SimConfig, bound_required_snr, required_snr


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--q", type=int, default=7)
    p.add_argument("--eta", nargs="*", default=["7/6", "1.17"])
    p.add_argument("--target", type=float, default=1e-3)
    p.add_argument("--trials", type=int, default=10**6)
    p.add_argument("--seed", type=int, default=20240101)
    args = p.parse_args()
    print("eta,side,alpha,beta,d_min,a_min,mc_snr_db,bound_snr_db")
    for eta in args.eta:
        c = build_constellation(args.q, eta)
        for side, pair in clustering_candidates_at_trough(c).items():
            res = d_min(c, pair)
            cfg = SimConfig(q=args.q, eta=eta, clustering=side, trials=args.trials, seed=args.seed)
            mc = required_snr(cfg, args.target, 10.0, 50.0).snr_db
            bound = bound_required_snr(args.q, res.d_min, res.a_min, args.target)
            print(f"{eta},{side},{pair.alpha},{pair.beta},{res.d_min},{res.a_min},{mc:.2f},{bound:.2f}")


if __name__ == "__main__":
    main()
