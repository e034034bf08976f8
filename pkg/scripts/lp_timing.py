"""Build and solve sizes for the exact LP engine on self-systems of random graphs."""
import argparse
import random
import time

from isolift import exact_lp
from isolift.corpus_graphs import random_graph
from isolift.polytopes import build_birkhoff, build_qpoly, build_tinhofer


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-n", type=int, default=6)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    print(f"{'system':<8}{'n':>3}{'k':>3}{'vars':>7}{'rows':>7}{'build s':>9}{'solve s':>9}  status")
    for n in range(3, args.max_n + 1):
        g = random_graph(rng, n)
        for k, flavor in ((1, "B"), (1, "T"), (2, "T"), (2, "Q"), (3, "Q")):
            if k == 3 and n > 5:
                continue
            t0 = time.perf_counter()
            ls = {"B": lambda: build_birkhoff(n, k), "T": lambda: build_tinhofer(g, g, k),
                  "Q": lambda: build_qpoly(g, g, k)}[flavor]()
            t1 = time.perf_counter()
            v = exact_lp.feasible(ls)
            t2 = time.perf_counter()
            print(f"{flavor:<8}{n:>3}{k:>3}{ls.num_vars:>7}{len(ls.rows):>7}{t1 - t0:>9.3f}{t2 - t1:>9.3f}  {v.status}")


if __name__ == "__main__":
    main()
