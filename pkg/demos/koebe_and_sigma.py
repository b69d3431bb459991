"""
The Koebe function on both sides of the circle
==============================================

A map ``w = e^{i theta} z (1 + a_2 z + ...)`` in the disk corresponds to
``F(z) = e^{-i theta} z v(1/z)`` outside it. We move coefficients back and
forth, measure the covered radius of Koebe maps and trace the image of the
circle under the exterior Koebe map.
"""

import numpy as np

from krzyz_lab import (
    SigmaNormalizedMap,
    SNormalizedMap,
    TruncatedSeries,
    cover_estimate,
    covered_radius,
    koebe,
    s_to_sigma,
    sigma_boundary,
    sigma_to_s,
)

# the Koebe function z / (1 - z)^2 has a_k = k
k = SNormalizedMap(TruncatedSeries(np.arange(12.0)), 0.0)
F = s_to_sigma(k, 8)
print("exterior coefficients b_0..b_4:", np.round(np.real(F.b_coeffs[:5]), 12))
print("back again, a_2..a_4:", np.round(sigma_to_s(F).series.coeffs[2:5].real, 12))

# quarter theorem: the image covers exactly |w| < 1/4, the missing point is -1/4
est = cover_estimate(koebe())
print("\ncovered radius", round(est.radius, 6), "boundary point", np.round(est.boundary_point, 6))
for t in (0.5, 0.9):
    print(f"dilation t={t}: covered radius {covered_radius(koebe(0.0, t), 2.0):.6f}  exact {1 / (1 + t) ** 2:.6f}")

# exterior Koebe map sends the circle onto the slit [-4, 0]
W = sigma_boundary(SigmaNormalizedMap((-2.0, 1.0), 0.0))
print("\nboundary image: real part in", (round(float(W.real.min()), 6), round(float(W.real.max()), 6)),
      "max |imag|", f"{np.abs(W.imag).max():.1e}")
