"""Random projections of the Euclidean ball become round balls.

Project T = B_2^400 to N = 20 dimensions with a gaussian matrix.  Whenever
N is below the eps-critical dimension (eps^2/ln(1/eps)) * k*, the image is
sandwiched between (1-eps) l* B_2 and (1+eps) l* B_2.  For the ball the
certificates are exact (singular values), so "verified" means proved.
"""

import numpy as np

from widthlab import (EuclideanBall, GAUSSIAN, LinearImage, critical_dimension,
                      dvoretzky_certificate, eps_critical_dimension,
                      mean_width, sample_matrix)

n, N, eps = 400, 20, 0.25
T = EuclideanBall(1.0, n)
width = mean_width(T, samples=20_000, seed=0)
kstar = critical_dimension(T, width)
print(f"l*(B_2^{n}) = {width.mean:.3f} +- {width.std_error:.3f},  k* = {kstar:.1f}")
print(f"eps-critical dimension at eps={eps}: "
      f"{eps_critical_dimension(kstar, eps):.1f}  (projecting to N={N})\n")

for trial in range(5):
    gamma = sample_matrix(GAUSSIAN, N, n, seed=100 + trial)
    V = LinearImage(T, gamma.rows)
    sv = np.linalg.svd(gamma.rows, compute_uv=False)
    inner, outer = dvoretzky_certificate(V, (1 - eps) * width.mean,
                                         (1 + eps) * width.mean)
    print(f"trial {trial}: singular values in [{sv[-1]:.2f}, {sv[0]:.2f}], "
          f"target [{(1 - eps) * width.mean:.2f}, {(1 + eps) * width.mean:.2f}] "
          f"-> inner {inner.status}, outer {outer.status}")

print("\nWith N far above the critical scale the sandwich must fail:")
gamma = sample_matrix(GAUSSIAN, 300, n, seed=999)
V = LinearImage(T, gamma.rows)
inner, outer = dvoretzky_certificate(V, (1 - eps) * width.mean,
                                     (1 + eps) * width.mean)
print(f"N=300: inner {inner.status} (margin {inner.margin:.2f}), "
      f"outer {outer.status} (margin {outer.margin:.2f})")
