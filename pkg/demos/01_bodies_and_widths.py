"""Support functions and gaussian mean widths for the body zoo.

Compares Monte Carlo mean widths against closed-form values and shows the
critical dimension k* = (l*/d)^2 for a few bodies.
"""

import numpy as np

from widthlab import (CubeBall, Ellipsoid, EuclideanBall, IntersectionL1L2,
                      L1Ball, critical_dimension, mean_width)

n = 100
bodies = {
    "B_2^100": EuclideanBall(1.0, n),
    "B_1^100": L1Ball(1.0, n),
    "B_inf^100": CubeBall(1.0, n),
    "ellipsoid(1..2)": Ellipsoid(np.linspace(1, 2, n)),
    "B_1 cap 0.3 B_2": IntersectionL1L2(0.3, n),
}

print(f"{'body':>18} {'width':>8} {'3*se':>7} {'radius':>7} {'k*':>7}")
for name, T in bodies.items():
    est = mean_width(T, samples=20_000, seed=1)
    k = critical_dimension(T, est)
    print(f"{name:>18} {est.mean:8.3f} {3 * est.std_error:7.3f} "
          f"{T.euclidean_radius():7.3f} {k:7.1f}")

print()
print("closed forms: l*(B_2^n) ~ sqrt(n) =", round(np.sqrt(n), 3),
      "; l*(B_1^n) ~ sqrt(2 ln n) =", round(np.sqrt(2 * np.log(n)), 3),
      "; l*(B_inf^n) = n sqrt(2/pi) =", round(n * np.sqrt(2 / np.pi), 1))
print("note: k*(B_2^n) = n, while k*(B_1^n) ~ 2 ln n -- the l1 ball has "
      "almost no Euclidean structure to project onto.")
