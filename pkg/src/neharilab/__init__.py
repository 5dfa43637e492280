"""Desk-scale numerical lab for the degenerate logistic equation

    du/dt = Lap u + lambda u + b(x) |u|^(nu-1) u,   u = 0 on the boundary,

with a nonpositive weight b vanishing on an interior subdomain: Nehari
manifold geometry, positive and mountain-pass equilibria, and the
gradient-flow dynamics connecting them.
"""

from .domain import (DomainSpec, Grid, WeightSpec, build_grid, build_weight,
                     h1_seminorm_sq, integrate, l2_norm, laplacian_apply)
from .nehari import (FiberSample, NehariReport, NotProjectable, ProblemParams,
                     classify, energy, fiber_scan, grad_energy, nehari_J,
                     nehari_energy_identity, project_to_nehari)
from .parabolic import (StepperConfig, TrajectoryRecord, basin_scan, evolve,
                        lyapunov_check, stable_probe, step)
from .spectral import (LinearizedOperator, SpectrumResult, dirichlet_spectrum,
                       linearized_spectrum, morse_count, subdomain_spectrum)
from .stationary import (EquilibriumResult, PathSpec, build_mp_path,
                         mountain_pass, nonexistence_probe, sign_domains,
                         solve_positive)

__version__ = "0.1.0"
