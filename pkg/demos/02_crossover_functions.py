"""The five crossover functions that interpolate prefactors between regimes.

Each function equals 1 (or its regime's constant) deep inside one regime and
bends toward the neighbouring regime's constant as its argument crosses 0.
The table prints both evaluation routes -- the closed Bessel/erfc forms and
direct quadrature -- which agree to ~1e-10 and guard each other against typos.
"""

import math

from metastable.crossover import CROSSOVER_FUNCTIONS, evaluate

LIMITS = {
    "psi_plus": (1.0, "Gamma(1/4)/(2^(5/4) sqrt(pi))"),
    "psi_minus": (2.0, "Gamma(1/4)/(2^(5/4) sqrt(pi))"),
    "theta_plus": (1.0, "Gamma(1/4)/2^(7/4)"),
    "theta_minus": (math.sqrt(math.pi / 2.0), "Gamma(1/4)/2^(7/4)"),
    "chi": (math.sqrt(2.0 / math.pi), "2"),
}


def main():
    alphas = [0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 50.0]
    for name in sorted(CROSSOVER_FUNCTIONS):
        limit, at_zero = LIMITS[name]
        print(f"\n{name}:  value at 0 = {at_zero},  limit at infinity = {limit:.6f}")
        print(f"  {'alpha':>6s}  {'closed form':>14s}  {'quadrature':>14s}  {'spread':>9s}")
        for alpha in alphas:
            closed = evaluate(name, alpha, route="closed_form").value
            quad = evaluate(name, alpha, route="quadrature").value
            spread = abs(closed / quad - 1.0)
            print(f"  {alpha:6.2f}  {closed:14.10f}  {quad:14.10f}  {spread:9.1e}")
        print(f"  approach to the limit at alpha=50: {evaluate(name, 50.0).value / limit:.4f}x")


if __name__ == "__main__":
    main()
