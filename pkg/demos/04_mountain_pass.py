"""The sign-changing mountain-pass equilibrium at lambda = 60.

For lambda_2(Omega) < lambda < lambda_1(Omega0) an explicit path from
phi to -phi can be projected sample by sample onto the manifold while
its energy stays below zero; deforming it downhill and polishing the
maximizer with Newton yields the sign-changing state u* at the min-max
level, with exactly one unstable direction.
"""

import numpy as np

import neharilab as nl

spec = nl.DomainSpec(1, (1.0,), (299,), ((0.4, 0.7),))
grid = nl.build_grid(spec)
b = nl.build_weight(grid, nl.WeightSpec("plateau", 1.0))
params = nl.ProblemParams(lam=60.0, nu=3.0, b=b)

phi = nl.solve_positive(grid, params)
print(f"endpoints: I(phi) = I(-phi) = {phi.energy:.4f}")

path = nl.build_mp_path(grid, params, phi.field)
energies = [nl.energy(grid, params, u) for u in path]
print(f"projected path: {len(path)} samples, "
      f"max I = {max(energies):.4f} (< 0: the barrier stays negative)")

ustar = nl.mountain_pass(grid, params, path)
print()
print("mountain-pass state u*:")
print(f"  residual        {ustar.residual_norm:.3e}")
print(f"  energy I(u*)    {ustar.energy:.6f}   "
      f"(between I(phi) = {phi.energy:.1f} and 0)")
print(f"  sign domains    {ustar.sign_domains}")
print(f"  Morse count     {ustar.morse_index}   (one unstable direction)")

lin = nl.linearized_spectrum(grid, params, ustar.field, k=4)
print(f"  linearized spectrum: "
      f"{np.array2string(lin.eigenvalues, precision=3)}")
print()
print("u* separates the basins of phi and -phi; its stable manifold is")
print("probed to first order in demos/05_dynamics_and_basin.py")
