"""The fibering map t -> I(t u) and the projection onto the manifold.

With a nonpositive weight the map has at most one turning point, always
a minimum: the manifold consists of fibering minima only (S+), and a ray
crosses it exactly when A < 0 and B < 0.
"""

import numpy as np

import neharilab as nl

spec = nl.DomainSpec(1, (1.0,), (199,), ((0.4, 0.7),))
grid = nl.build_grid(spec)
b = nl.build_weight(grid, nl.WeightSpec("plateau", 1.0))
params = nl.ProblemParams(lam=20.0, nu=3.0, b=b)

psi1 = nl.dirichlet_spectrum(grid, 1).eigenfields[0]

report = nl.classify(grid, params, psi1)
print(f"direction psi_1: A = {report.A:.4f}, B = {report.B:.4f}, "
      f"classes {report.l_class}/{report.b_class}")

t_star, on_manifold = nl.project_to_nehari(grid, params, psi1)
print(f"projection scale t* = (A/B)^(1/(nu-1)) = {t_star:.6f}")
print(f"J on the projected point: {nl.nehari_J(grid, params, on_manifold):.3e}")

print()
print("fibering map along psi_1 (the minimum sits at t = t*):")
for s in nl.fiber_scan(grid, params, psi1, t_star * np.array(
        [0.25, 0.5, 0.75, 1.0, 1.25, 1.5])):
    marker = "  <- minimum" if abs(s.t - t_star) < 1e-12 else ""
    print(f"  t = {s.t:8.4f}   I(t u) = {s.value:12.6f}   "
          f"slope = {s.slope:10.6f}{marker}")

I, fa, fb = nl.nehari_energy_identity(grid, params, on_manifold)
print()
print(f"on the manifold I = (1/2 - 1/(nu+1)) A = (same) B:")
print(f"  {I:.10f} = {fa:.10f} = {fb:.10f}")

# a ray that never crosses: a field supported inside Omega0 has B = 0
inside = np.where(grid.omega0_mask, 1.0, 0.0)
try:
    nl.project_to_nehari(grid, params, inside)
except nl.NotProjectable as exc:
    print()
    print(f"field supported in Omega0 is not projectable: {exc}")
