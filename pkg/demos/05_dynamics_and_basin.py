"""Gradient-flow dynamics: dissipation, basins, and the saddle probe.

The semi-implicit scheme treats diffusion implicitly and the reaction
explicitly, so discrete equilibria are exact fixed points and the energy
decreases step by step.  Positive data fall into phi, negative data into
-phi, and perturbing the mountain-pass saddle along a stable eigenfield
produces a first-order predictable value of the Nehari functional.
"""

import numpy as np

import neharilab as nl

spec = nl.DomainSpec(1, (1.0,), (199,), ((0.4, 0.7),))
grid = nl.build_grid(spec)
b = nl.build_weight(grid, nl.WeightSpec("plateau", 1.0))
params = nl.ProblemParams(lam=60.0, nu=3.0, b=b)

phi = nl.solve_positive(grid, params)
equilibria = [("phi", phi.field), ("-phi", -phi.field),
              ("zero", np.zeros(grid.n_nodes))]
cfg = nl.StepperConfig(horizon=20.0, stride=10)

rng = np.random.default_rng(0)
psi1 = nl.dirichlet_spectrum(grid, 1).eigenfields[0]
seeds = [("0.1 psi1", 0.1 * psi1), ("-0.1 psi1", -0.1 * psi1),
         ("random", 0.3 * rng.standard_normal(grid.n_nodes))]

print("basin scan (initial Nehari labels vs long-time limit):")
rows = nl.basin_scan(grid, params, seeds, cfg, equilibria)
for row in rows:
    print(f"  {row.seed_id:>10}: side {row.nehari_side:>2}, "
          f"{row.l_class}/{row.b_class}  ->  {row.classification} "
          f"({row.equilibrium}), I = {row.final_energy:.4f}")

print()
print("energy dissipation along the flow from 0.1 psi1:")
rec = nl.evolve(grid, params, 0.1 * psi1, cfg, equilibria)
report = nl.lyapunov_check(rec)
print(f"  {len(rec.step_times)} steps, monotone: {report.monotone}, "
      f"max identity defect {report.max_identity_defect:.3e}")
for i in range(0, len(rec.times), max(1, len(rec.times) // 6)):
    print(f"  t = {rec.times[i]:7.3f}   I = {rec.energies[i]:12.6f}   "
          f"side {rec.nehari_sides[i]}")

print()
print("stable-manifold probe at the mountain-pass saddle:")
path = nl.build_mp_path(grid, params, phi.field)
ustar = nl.mountain_pass(grid, params, path)
for eps in (1e-2, 5e-3, 2.5e-3):
    r = nl.stable_probe(grid, params, ustar.field, i=2, eps=eps)
    print(f"  eps = {eps:7.4f}: J measured {r.measured_J:12.8f}, "
          f"predicted eps*mu*a = {r.prediction:12.8f}, "
          f"defect {r.defect:.2e}")
print("  the defect shrinks fourfold per halving: the expansion is "
      "first-order exact")
