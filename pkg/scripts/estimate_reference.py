"""Monte Carlo check of the optimal estimator on the reference qubit across sample sizes."""

import argparse

import numpy as np

from wvuncertainty import PAULI_X, PAULI_Z, EstimationSetup, PhysicsConfig, PureState
from wvuncertainty.estimation import fisher_information, monte_carlo_estimate, optimal_estimator


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--hbar", type=float, default=1.0)
    ap.add_argument("--t0", type=float, default=0.0)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    setup = EstimationSetup(PAULI_X, PureState(np.array([1, 1j]) / np.sqrt(2)), args.t0, PhysicsConfig(args.hbar))
    fisher = fisher_information(setup, PAULI_Z).fisher
    g = optimal_estimator(setup, PAULI_Z)
    print(f"I(t0) = {fisher:.12g}, Cramer-Rao bound 1/I = {1 / fisher:.12g}, g_opt = {g.real}")
    print(f"{'n':>8} {'mean - t0':>12} {'5 sigma':>10} {'var * I':>10}")
    for n in (100, 1_000, 10_000, 100_000, 1_000_000):
        mc = monte_carlo_estimate(setup, PAULI_Z, g, n, args.seed)
        print(f"{n:>8} {mc.empirical_mean - args.t0:>12.2e} {5 / np.sqrt(n * fisher):>10.2e} "
              f"{mc.empirical_variance * fisher:>10.5f}")


if __name__ == "__main__":
    main()
