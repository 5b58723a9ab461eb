#!/usr/bin/env python3
"""Monte Carlo check of sample-covariance eigenvalue edges.

For iid unit-variance returns the extreme eigenvalues approach
(1 - sqrt(y))^2 and (1 + sqrt(y))^2 with y = N/M. This sweeps a few
aspect ratios and prints observed vs. limiting values.
"""

import argparse

import covreg as cr


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=200)
    ap.add_argument("--trials", type=int, default=5)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--ratios", type=float, nargs="+",
                    default=[0.1, 0.25, 0.5, 1.0, 2.0])
    args = ap.parse_args()

    print(f"{'y':>6} {'min_limit':>10} {'min_obs':>10} "
          f"{'max_limit':>10} {'max_obs':>10}")
    for y in args.ratios:
        m = int(round(args.n / y))
        rep = cr.bai_yin_check(args.n, m, args.trials, args.seed)
        print(f"{rep.y:>6.3f} {rep.lambda_min_limit:>10.4f} "
              f"{rep.observed_min:>10.4f} {rep.lambda_max_limit:>10.4f} "
              f"{rep.observed_max:>10.4f}")


if __name__ == "__main__":
    main()
