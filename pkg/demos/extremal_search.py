"""
Searching for large coefficients of zero-free bounded functions
===============================================================

Zero-free functions bounded by one can be written ``exp(-p)`` with ``p`` a
Herglotz function. We let a multi-start simplex search move the atoms of
``p`` and watch the best ``|c_n|`` stop at ``2/e``, attained by
``kappa_0(z^n)``.
"""

import math

import numpy as np

from krzyz_lab import Functional, Herglotz, TruncatedSeries, canonical_rotation, kappa0_power, maximize

# a short campaign for each n; the default campaign uses 64 starts
for n in (1, 2, 3):
    rep, _ = maximize(Functional("c", n), Herglotz(n + 1), starts=8, seed=7)
    print(f"n={n}: best |c_n| = {rep.best_value:.12f}  (2/e = {2 / math.e:.12f}), "
          f"distance to kappa_0(z^n) = {rep.distance_to_extremal:.1e}, tau = {rep.tau:.1e}")

# up to a common rotation the atoms sit at the n-th roots of -1 with total
# weight 1/n at each; the spare atom merges with one of them
print("atoms for n=3:", np.round(rep.best_params["angles"], 4), np.round(rep.best_params["weights"], 4))

# after fixing the rotations the coefficients match the extremal
pairs = np.array(rep.best_coeffs)
g, _, _ = canonical_rotation(TruncatedSeries(pairs[:, 0] + 1j * pairs[:, 1]), 3)
print("first coefficients:", np.round(g.coeffs[:7].real, 6))
print("kappa_0(z^3):      ", np.round(kappa0_power(3, 64).coeffs[:7].real, 6))
print("certified evaluations:", rep.certified_evaluations, " exceeds bound:", rep.exceeds_bound)
