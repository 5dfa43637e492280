"""Spectral landmarks of the default geometry and the lambda windows.

The domain is (0, 1) with the favorable subdomain (0.4, 0.7): the weight
b vanishes there and equals -1 outside.  The first eigenvalue of the
subdomain is the sharp threshold above which no positive equilibrium
exists, no matter how large lambda makes the linear growth.
"""

import numpy as np

import neharilab as nl
from neharilab.config import regime_label

spec = nl.DomainSpec(dimension=1, extent=(1.0,), resolution=(299,),
                     omega0=((0.4, 0.7),))
grid = nl.build_grid(spec)

omega = nl.dirichlet_spectrum(grid, 3)
omega0 = nl.subdomain_spectrum(grid, 3)

print("eigenvalues of -Lap on Omega = (0, 1):")
for i, (mu, target) in enumerate(zip(omega.eigenvalues,
                                     (np.pi ** 2 * (k + 1) ** 2
                                      for k in range(3))), start=1):
    print(f"  lambda_{i} = {mu:12.6f}   (continuum {target:12.6f})")

print("eigenvalues of -Lap on Omega0 = (0.4, 0.7):")
for i, mu in enumerate(omega0.eigenvalues, start=1):
    target = (i * np.pi / 0.3) ** 2
    print(f"  lambda_{i} = {mu:12.6f}   (continuum {target:12.6f})")

lam1, lam2 = omega.eigenvalues[:2]
lam1_sub = omega0.eigenvalues[0]
print()
print(f"positive equilibria exist for lambda in ({lam1:.4f}, {lam1_sub:.4f})")
print(f"the sign-changing mountain-pass state needs lambda > {lam2:.4f}")
print()
for lam in (5.0, 20.0, 60.0, 120.0):
    print(f"  lambda = {lam:6.1f}  ->  {regime_label(lam, lam1, lam2, lam1_sub)}")
