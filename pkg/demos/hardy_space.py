"""
Coefficients of zero-free functions in Hardy spaces
===================================================

Raising the extremal ``kappa_0`` to the power ``2/p`` and mixing with a
Koebe-type factor gives a unit-norm member of ``H^p`` whose ``n``-th
coefficient equals ``(2/e)^(1 - 1/p)``. A random search over unit-norm
members never beats that value.
"""

import math

from krzyz_lab import HpSpec, hp_means, hp_norm, hsz_bound_check, hsz_candidate, kappa0, n1_sweep, parseval_check

print(" p   n   |c_n|        bound        H^p norm")
for p in (1.5, 2.0, 4.0):
    for n in (1, 2, 3):
        spec = HpSpec(p, n)
        chk = hsz_bound_check(spec)
        print(f"{p:3.1f} {n:2d}   {chk.coeff:.8f}   {chk.bound:.8f}   {hp_norm(hsz_candidate(spec, 256), p):.6f}")

# on H^2 the norm is the l^2 norm of the coefficients
k = kappa0(200).series
print("\nH^2 norm of kappa_0:", hp_norm(k, 2.0), " Parseval:", math.sqrt(parseval_check(k).sum))
print("integral means at r = 0.99, 0.999:", hp_means(k, 2.0))

# a small random search for n = 1
res = n1_sweep(2.0, starts=8)
print(f"\nbest |c_1| over unit-norm members: {res.best:.12f}  bound {HpSpec(2.0, 1).bound:.12f}")
