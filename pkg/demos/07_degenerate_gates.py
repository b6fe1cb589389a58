"""Fully degenerate gates: the double-zero window and the ring of saddles.

When both transverse eigenvalues of a gate sit inside the window
|lambda2| <~ sqrt(eps |log eps|), the double-zero formula applies; once the
soft mode drops below the window the gate has already split into a ring of
2M saddles and the dedicated ring formula takes over.  This script prints
the prefactor through the window and the three plateaus of the ring regime.
"""

import math

import numpy as np

from metastable import soft_window, sweep_doublezero, sweep_sombrero


def main():
    eps = 1e-3
    window = soft_window(eps)
    print(f"eps = {eps}: crossover window sqrt(eps |log eps|) = {window:.4f}")

    grid = [float(v) for v in np.linspace(-window, 2.0 * window, 10)]
    print(f"\ndouble-zero gate across the window (angular profile k = 0.5):")
    print(f"  {'lambda2':>9s}  {'prefactor':>12s}  regime")
    for row in sweep_doublezero(eps, grid, angular=0.5):
        print(f"  {row['control_parameter']:9.4f}  {row['prefactor']:12.6f}  {row['regime_tag']}")

    # ring regime: three-particle defaults (M = 3 gate pairs, C4 = 1/8 so the
    # effective quartic scale is b = 8 eps C4 = eps)
    eps = 1e-4
    print(f"\nring of 6 saddles at eps = {eps}: denominator plateaus")
    print(f"  {'mu3':>8s}  {'prefactor':>12s}  {'theta*chi':>10s}  plateau")
    targets = [
        (1e-3, math.sqrt(math.pi / 2.0), "sqrt(pi/2)   (both crossovers at 0)"),
        (0.05, math.sqrt(2.0 * math.pi), "sqrt(2 pi)   (radial saturated)"),
        (3.0, 1.0, "1            (fully split ring)"),
    ]
    for mu3, target, label in targets:
        row = sweep_sombrero(eps, [mu3])[0]
        product = (math.pi / 3.0) * math.sqrt(0.5 * mu3**3 + 36.0 * eps) / row["prefactor"]
        print(f"  {mu3:8.3f}  {row['prefactor']:12.6f}  {product:10.4f}  "
              f"{label}  [target {target:.4f}]")


if __name__ == "__main__":
    main()
