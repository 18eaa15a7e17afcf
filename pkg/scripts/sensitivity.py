"""Tabulate how close to eta = 1 the first two troughs sit, and how deep they are."""

import argparse

from qpam_pnc.curve import sensitivity_report
from qpam_pnc.gf import is_prime


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--q-max", type=int, default=31)
    args = p.parse_args()
    print("q,eta_o1,d_o1,eta_o2,d_o2,offset_o1,offset_o2")
    for q in range(3, args.q_max + 1):
        if not is_prime(q):
            continue
        r = sensitivity_report(q)
        print(",".join(str(x) for x in (q, r.eta_first_odd, r.d_first_odd, r.eta_second_odd,
                                        r.d_second_odd, r.offset_first, r.offset_second)))


if __name__ == "__main__":
    main()
