"""Run the end-to-end check for several (s, delta) and seeds and print one line each.

    python3 scripts/verify_counterexamples.py            # (3,0), (3,1), (3,2)
    python3 scripts/verify_counterexamples.py --large    # also (4,5), under a minute and 3 GB
"""

import argparse
import resource
import time

from mrcfail import mrc


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--prime", type=int, default=32003)
    parser.add_argument("--seeds", type=int, default=3)
    parser.add_argument("--large", action="store_true", help="include (s, delta) = (4, 5)")
    args = parser.parse_args()

    cases = [(3, 0), (3, 1), (3, 2)] + ([(4, 5)] if args.large else [])
    for s, delta in cases:
        seeds = range(1, args.seeds + 1) if (s, delta) != (4, 5) else [1]
        for seed in seeds:
            start = time.perf_counter()
            rep = mrc.verify_counterexample(s, delta, args.prime, seed)
            pr = rep.params
            i, j = pr.entry
            print(f"(s,delta)=({s},{delta}) (r,gamma)=({pr.r},{pr.gamma}) seed={seed} "
                  f"b[{i},{j}]: computed={rep.computed} lower_bound={rep.lower_bound} "
                  f"expected={rep.expected} {rep.verdict} {time.perf_counter() - start:.1f}s",
                  flush=True)
    peak = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024
    print(f"peak memory {peak:.0f} MB")


if __name__ == "__main__":
    main()
