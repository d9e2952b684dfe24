"""Mean signed 4-cycle count of sign graphs of X X^T - Y Y^T across d, with a GOE baseline."""
import argparse
import json

from raglab.rng import default_workers
from raglab.wishart import wishart_transition_experiment


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=16)
    ap.add_argument("--d-grid", default="64,128,256,512")
    ap.add_argument("--trials", type=int, default=60000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=default_workers())
    a = ap.parse_args()
    grid = [int(x) for x in a.d_grid.split(",")]
    rep = wishart_transition_experiment(a.n, grid, a.trials, a.seed, workers=a.workers)
    print(json.dumps(rep.to_json(), indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
