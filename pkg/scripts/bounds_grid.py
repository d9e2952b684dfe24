"""KL-expansion totals, Pinsker bounds and main-theorem brackets over (d, n)."""
import argparse
import csv
import sys

from raglab import bounds
from raglab.cli import gamma_for, parse_connection


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--connection", default="maj")
    ap.add_argument("--d-grid", default="64,128,256,512,1024")
    ap.add_argument("--n-grid", default="4,8,16")
    ap.add_argument("--m", type=int, default=2)
    a = ap.parse_args()
    w = csv.writer(sys.stdout, lineterminator="\r\n")
    w.writerow(["d", "n", "total_kl", "tv_bound", "bracket", "C_m", "D"])
    for d in (int(x) for x in a.d_grid.split(",")):
        lv, g = gamma_for(parse_connection(a.connection, d))
        for n in (int(x) for x in a.n_grid.split(",")):
            kl = bounds.kl_bound_exact(g, n)
            mt = bounds.main_thm_terms(lv, n, a.m)
            w.writerow([d, n, repr(kl.total), repr(kl.tv_bound), repr(mt.bracket), repr(mt.C_m), repr(mt.D)])


if __name__ == "__main__":
    main()
