"""Monte Carlo first-hitting times cross-checked against the closed form.

Simulates the overdamped dynamics dx = -grad V dt + sqrt(2 eps) dW in the 1-D
double well, estimates the mean time to reach the far well, and validates it
against the closed-form expected time.  Each replica owns a counter-based
random stream, so results are reproducible bit for bit.

Takes about half a minute.
"""

import math

from metastable import (
    Ball,
    MinimumSpec,
    Quadratic,
    SaddleSpec,
    SimulationConfig,
    double_well_1d,
    ek_classical,
    simulate_first_hitting,
    validate,
)


def main():
    model = double_well_1d()
    minimum = MinimumSpec(value=-0.25, eigenvalues=(2.0,))
    saddle = SaddleSpec(
        value=0.0, regime=Quadratic(), unstable_eigenvalue=1.0, stable_eigenvalues=()
    )
    print(f"{'eps':>5s}  {'predicted':>10s}  {'measured':>10s}  {'stderr':>7s}  "
          f"{'ratio':>6s}  verdict")
    for eps in (0.3, 0.25, 0.2):
        prediction = ek_classical(minimum, saddle, eps=eps)
        estimate = simulate_first_hitting(
            model,
            SimulationConfig(
                eps=eps,
                dt=1e-3,
                max_time=150.0,
                replicas=800,
                seed=42,
                start=(-1.0,),
                target=Ball(center=(1.0,), radius=0.2),
            ),
        )
        r = validate(estimate, prediction)
        print(
            f"{eps:5.2f}  {prediction.expected_time:10.3f}  {estimate.mean:10.3f}  "
            f"{estimate.stderr:7.3f}  {r.ratio:6.3f}  {r.verdict} (tol {r.tolerance:.2f})"
        )
    print(
        "\nThe measured/predicted ratio sits above 1 by O(sqrt(eps)) -- exactly "
        "the correction order the closed form quotes."
    )
    print(f"predicted time at eps=0.2 is pi sqrt(2) e^(1/0.8) = "
          f"{math.pi * math.sqrt(2) * math.exp(1.25):.3f}")


if __name__ == "__main__":
    main()
