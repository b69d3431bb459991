"""
Covering maps of the punctured disk and of annuli
=================================================

The universal covering of the punctured disk is ``kappa_0 = exp((z-1)/(z+1))``.
Its derivative at the origin is ``2/e``. For the annulus ``rho < |w| < 1`` the
best derivative at 0, ``alpha(rho)``, is smaller and creeps back to ``2/e``
as the hole shrinks.
"""

import math

import numpy as np

from krzyz_lab import alpha, alpha_by_density, count_zeros, covering_function, kappa0, kappa_rho

# the first coefficients of kappa_0
k = kappa0(8).series
print("kappa_0 coefficients:", np.round(k.coeffs[:5].real, 6))
print("2/e =", 2 / math.e)

# alpha(rho) from the closed form and from maximising 1/lambda directly
print("\n   rho        alpha       by density    2/e - alpha")
for rho in (0.5, 0.1, 1e-2, 1e-4, 1e-6, 1e-9):
    a = alpha(rho)
    print(f"{rho:8.0e}  {a:.8f}  {alpha_by_density(rho):.8f}  {2 / math.e - a:.2e}")

# the gap closes slowly, roughly like 1 / log(1/rho)^2
for rho in (1e-4, 1e-8, 1e-16):
    print(f"rho={rho:.0e}: gap * log(1/rho)^2 = {(2 / math.e - alpha(rho)) * math.log(1 / rho) ** 2:.3f}")

# the covering map omits 0: its closed form has no zeros in the disk
kappa, dlog = covering_function(0.1)
print("\nzeros of kappa_0.1 inside |z| < 0.99:", count_zeros(kappa, 0.99, df=dlog))
print("kappa_0.1 series, |c_0| and c_1:", abs(kappa_rho(0.1, 16).series.coeffs[0]), kappa_rho(0.1, 16).deriv0)
