#!/usr/bin/env python3
"""Simulate a unit-atom walk and print how the empirical n-step law and
the two analytic routes (closed form and transform inversion) line up.

Usage: python scripts/walk_demo.py [paths] [horizon]
"""

import sys

import numpy as np

from kendall_walks import (
    Dirac,
    WalkConfig,
    ks_statistic,
    nstep_delta1_cdf,
    simulate,
)
from kendall_walks.williamson import nstep_cdf


def main() -> int:
    paths = int(sys.argv[1]) if len(sys.argv) > 1 else 100_000
    horizon = int(sys.argv[2]) if len(sys.argv) > 2 else 6
    config = WalkConfig(
        convolution="kendall",
        alpha=1.0,
        unit_step=Dirac(1.0),
        horizon=horizon,
        paths=paths,
        seed=2026,
    )
    ensemble = simulate(config)
    grid = np.linspace(1.0, 25.0, 9)
    print(f"{paths} paths, horizon {horizon}, unit-atom steps, alpha=1")
    print(f"{'n':>3} {'KS(empirical, closed form)':>28} {'max|closed - transform|':>26}")
    for n in range(2, horizon + 1):
        ks = ks_statistic(
            ensemble.states[:, n], lambda x, n=n: nstep_delta1_cdf(n, 1.0, x)
        )
        gap = np.max(
            np.abs(
                nstep_delta1_cdf(n, 1.0, grid)
                - nstep_cdf(Dirac(1.0), 1.0, n, grid)
            )
        )
        print(f"{n:>3} {ks:>28.5f} {gap:>26.3e}")
    tail = ensemble.states[:, horizon]
    print(
        f"\nheavy tail at n={horizon}: "
        f"P(X>10) empirical {float((tail > 10).mean()):.4f}, "
        f"exact {1 - nstep_delta1_cdf(horizon, 1.0, 10.0):.4f}"
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
