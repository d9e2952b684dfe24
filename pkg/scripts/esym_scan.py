"""Exact log ||e_s||_t next to its upper and lower bounds; one CSV row per (d, s, t)."""
import argparse
import csv
import sys

from raglab.fourier import elem_sym_bounds, elem_sym_log_moment


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--d-max", type=int, default=64)
    ap.add_argument("--t-max", type=int, default=8)
    a = ap.parse_args()
    w = csv.writer(sys.stdout, lineterminator="\r\n")
    w.writerow(["d", "s", "t", "log_exact", "log_upper_hc", "log_upper_mid", "log_lower", "slack_hc"])
    for d in range(2, a.d_max + 1):
        for s in range(1, d):
            for t in range(2, a.t_max + 1):
                ex = elem_sym_log_moment(d, s, t)
                b = elem_sym_bounds(d, s, t)
                mid = "" if b.log_upper_mid is None else repr(b.log_upper_mid)
                w.writerow([d, s, t, repr(ex), repr(b.log_upper_hc), mid, repr(b.log_lower),
                            repr(b.log_upper_hc - ex)])


if __name__ == "__main__":
    main()
