"""Tour of the saddle classifier across the zoo of gate geometries.

Walks one potential per classification cell -- from a plain quadratic saddle
through soft (flat) directions, cubic degeneracies, and two-dimensional null
spaces -- and prints the verdict the landscape module assigns to each.
"""

import numpy as np

from metastable import PolynomialPotential, classify, find_stationary_points
from metastable.landscape import StationaryPoint

CASES = [
    (
        "quadratic saddle",
        2,
        [((2, 0), -0.5), ((4, 0), 0.25), ((0, 2), 0.5)],
    ),
    (
        "local minimum (no transition here)",
        2,
        [((2, 0), 0.5), ((0, 2), 0.5)],
    ),
    (
        "soft stable direction  (+y^4 wall)",
        2,
        [((2, 0), -0.5), ((0, 4), 0.25)],
    ),
    (
        "soft unstable direction (-x^4 exit)",
        2,
        [((4, 0), -0.25), ((0, 2), 0.5)],
    ),
    (
        "cubic along the null direction",
        2,
        [((2, 0), -0.5), ((0, 3), 1.0)],
    ),
    (
        "two soft directions, definite quartic ring",
        3,
        [((4, 0, 0), 0.25), ((2, 2, 0), 0.5), ((0, 4, 0), 0.25), ((0, 0, 2), -0.5)],
    ),
    (
        "two soft directions, sign-changing quartic",
        3,
        [((4, 0, 0), 0.25), ((0, 4, 0), -0.25), ((0, 0, 2), 0.5)],
    ),
]


def poly(dim, terms):
    return PolynomialPotential.from_dict(
        {"dimension": dim, "terms": [{"exponents": list(e), "coeff": c} for e, c in terms]}
    )


def main():
    print(f"{'case':45s}  {'tag':22s}  {'verdict':12s}  detail")
    print("-" * 100)
    for name, dim, terms in CASES:
        model = poly(dim, terms)
        point = StationaryPoint.at(model, np.zeros(dim))
        sc = classify(model, point)
        extra = ""
        if sc.tag.value == "Codim1":
            extra = f"C3={sc.detail.C3:+.3f} C4={sc.detail.C4:+.3f}"
        elif sc.tag.value == "Codim2":
            extra = f"K-={sc.detail.K_minus:.3f} K+={sc.detail.K_plus:.3f}"
        print(f"{name:45s}  {sc.tag.value:22s}  {sc.verdict.value:12s}  {extra}")

    # the classifier also drives full stationary-point searches:
    print("\nStationary points of the 1-D double well x^4/4 - x^2/2:")
    dw = poly(1, [((4,), 0.25), ((2,), -0.5)])
    for p in find_stationary_points(dw, [np.array([v]) for v in (-1.5, 0.2, 1.5)]):
        sc = classify(dw, p)
        print(
            f"  x = {p.location[0]:+.3f}  V = {p.value:+.3f}  "
            f"{sc.tag.value}/{sc.verdict.value}"
        )


if __name__ == "__main__":
    main()
