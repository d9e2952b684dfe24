"""Triangle-count means of the direct SBM sampler and its subgroup-connection realisation."""
import argparse
import json

from raglab.graphs import sbm_equivalence


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=40)
    ap.add_argument("--k", type=int, default=2)
    ap.add_argument("--p", type=float, default=0.7)
    ap.add_argument("--q", type=float, default=0.2)
    ap.add_argument("--trials", type=int, default=300)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    print(json.dumps(vars(sbm_equivalence(a.n, a.k, a.p, a.q, a.trials, a.seed)), indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
