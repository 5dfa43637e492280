"""The positive equilibrium phi and what happens above the threshold.

Inside the admissible window lambda_1(Omega) < lambda < lambda_1(Omega0)
a damped Newton iteration lands on the unique positive equilibrium, the
global minimizer of the energy over the manifold.  At lambda = 120,
above the subdomain threshold, every attempt fails and the parabolic
flow grows without bound inside Omega0 instead.
"""

import numpy as np

import neharilab as nl
from neharilab.stationary import nonexistence_probe

spec = nl.DomainSpec(1, (1.0,), (299,), ((0.4, 0.7),))
grid = nl.build_grid(spec)
b = nl.build_weight(grid, nl.WeightSpec("plateau", 1.0))

for lam in (20.0, 60.0):
    params = nl.ProblemParams(lam=lam, nu=3.0, b=b)
    phi = nl.solve_positive(grid, params)
    print(f"lambda = {lam}:")
    print(f"  residual          {phi.residual_norm:.3e}")
    print(f"  energy I(phi)     {phi.energy:.6f}")
    print(f"  max phi           {phi.field.max():.4f}")
    print(f"  Morse count       {phi.morse_index}   (0 = dynamically stable)")
    print(f"  manifold class    {phi.nehari_report.s_class}")
    print()

params = nl.ProblemParams(lam=120.0, nu=3.0, b=b)
print("lambda = 120 (above the subdomain threshold):")
report = nonexistence_probe(grid, params, rng=np.random.default_rng(0))
print(f"  Newton attempts: {report.attempts}")
print(f"  L2 norm on Omega0 along the flow: "
      f"{report.l2_omega0_series[0]:.3f} -> {report.growth_stat:.1f} "
      f"over t in [0, {report.times[-1]:.2f}]")
print("  no positive equilibrium; the solution grows up inside Omega0")
