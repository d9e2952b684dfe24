"""Empirical tau3/tau4 power of several connections against G(n, p) over a grid of d."""
import argparse
import csv
import sys
from fractions import Fraction

from raglab import connections as cx
from raglab.graphs import ERModel, RAGModel
from raglab.rng import default_workers
from raglab.stats import detection_experiment

BUILDERS = {
    "double-threshold": lambda d: cx.make_double_threshold(d, Fraction(1, 8)),
    "hard-threshold": lambda d: cx.make_hard_threshold(d, Fraction(1, 4)),
    "majority": cx.make_majority,
    "hnmaj": cx.make_hnmaj,
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=32)
    ap.add_argument("--d-grid", default="16,64,256,1024,4096")
    ap.add_argument("--connections", default="double-threshold,hard-threshold,majority")
    ap.add_argument("--stat", default="tau3", choices=["tau3", "tau4"])
    ap.add_argument("--trials", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=default_workers())
    a = ap.parse_args()
    w = csv.writer(sys.stdout, lineterminator="\r\n")
    w.writerow(["connection", "d", "n", "p", "statistic", "power", "separation"])
    for name in a.connections.split(","):
        for d in (int(x) for x in a.d_grid.split(",")):
            conn = BUILDERS[name](d)
            p = float(conn.mean_p)
            rep = detection_experiment(RAGModel(a.n, conn), ERModel(a.n, p), a.stat, a.trials, a.seed,
                                       workers=a.workers)
            w.writerow([name, d, a.n, repr(p), a.stat, repr(rep.power), repr(rep.separation)])


if __name__ == "__main__":
    main()
