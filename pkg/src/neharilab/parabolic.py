"""Semi-implicit time integration of the evolution problem, Lyapunov
monitoring, trajectory classification, and stable-manifold probing.

One step solves (Id + dt * (-Lap)) u+ = u + dt * (lambda u + b |u|^(nu-1) u):
diffusion implicit, reaction explicit.  Discrete equilibria of the
stationary problem are exact fixed points of the scheme.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .domain import Grid, h1_seminorm_sq, l2_norm
from .nehari import ProblemParams, classify, energy, odd_power
from .spectral import linearized_spectrum, morse_count
from .stationary import residual_field

__all__ = [
    "StepperConfig",
    "TrajectoryRecord",
    "LyapunovReport",
    "StableProbeResult",
    "BasinRow",
    "StepOverflow",
    "MonotonicityViolation",
    "NoUnstableEigenvalueComputed",
    "step",
    "evolve",
    "lyapunov_check",
    "stable_probe",
    "basin_scan",
]

# explicit reaction stays contraction-dominated below this dt * rate
_STABILITY_CONSTANT = 0.2


class StepOverflow(RuntimeError):
    """The explicit reaction term overflowed; reduce dt."""


class MonotonicityViolation(RuntimeError):
    def __init__(self, steps):
        self.steps = steps
        super().__init__(f"energy increased beyond tolerance at steps {steps[:10]}")


class NoUnstableEigenvalueComputed(RuntimeError):
    """The Morse count could not be certified at the base state."""


@dataclass(frozen=True)
class StepperConfig:
    """dt=None picks dt adaptively from the stability policy."""

    dt: float | None = None
    horizon: float = 20.0
    stride: int = 10
    growth_cutoff: float = 1e3
    scheme: str = "semi-implicit"

    def __post_init__(self):
        if self.dt is not None and self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.horizon <= 0 or self.stride < 1:
            raise ValueError("invalid horizon or stride")
        if self.scheme != "semi-implicit":
            raise ValueError(f"unknown scheme {self.scheme!r}")


@dataclass(frozen=True, eq=False)
class TrajectoryRecord:
    times: np.ndarray
    energies: np.ndarray
    l2_norms: np.ndarray
    h1_norms: np.ndarray
    ut_norms: np.ndarray
    nehari_sides: list
    sample_fields: list          # field at every sample time
    final_field: np.ndarray
    classification: str          # 'converged', 'growing', 'undecided'
    equilibrium: str | None      # name when converged
    # per-step scalars for the dissipation identity
    step_times: np.ndarray
    step_energies: np.ndarray
    step_dissipation: np.ndarray   # ||u+ - u||_L2^2 / dt per step
    step_dts: np.ndarray


@dataclass(frozen=True)
class LyapunovReport:
    max_identity_defect: float
    identity_constant: float      # max defect / dt^2
    monotone: bool
    violations: list


@dataclass(frozen=True, eq=False)
class StableProbeResult:
    index: int
    mu: float
    a: float                      # overlap int u* psi_i
    prediction: float             # eps * mu * a
    measured_J: float
    defect: float
    dwell_time: float
    eps: float


@dataclass(frozen=True, eq=False)
class BasinRow:
    seed_id: str
    nehari_side: str
    l_class: str
    b_class: str
    classification: str
    equilibrium: str | None
    final_energy: float


def reaction(params: ProblemParams, u: np.ndarray) -> np.ndarray:
    return params.lam * u + params.b * odd_power(u, params.nu)


def dt_policy(params: ProblemParams, u: np.ndarray) -> float:
    """dt <= 0.2 / (lambda + max_x nu*|b(x)|*|u(x)|^(nu-1) + 1).

    The reaction rate is taken nodewise: where b vanishes the cubic term
    exerts no stiffness no matter how large u grows there."""
    react = params.nu * np.abs(params.b) * np.abs(u) ** (params.nu - 1.0)
    rate = params.lam + float(react.max()) + 1.0
    return _STABILITY_CONSTANT / rate


def _implicit_factor(grid: Grid, dt: float):
    return spla.factorized(sp.csc_matrix(sp.identity(grid.n_nodes) + dt * grid.lap))


def step(grid: Grid, params: ProblemParams, u: np.ndarray, dt: float,
         solve=None) -> np.ndarray:
    """One semi-implicit update; the linear solve is SPD."""
    rhs = u + dt * reaction(params, u)
    if not np.all(np.isfinite(rhs)):
        raise StepOverflow(f"explicit term overflowed at dt={dt:.3e}")
    if solve is None:
        solve = _implicit_factor(grid, dt)
    return solve(rhs)


def evolve(grid: Grid, params: ProblemParams, u0: np.ndarray,
           cfg: StepperConfig, equilibria: list,
           conv_tol: float = 1e-6) -> TrajectoryRecord:
    """Integrate to the horizon or until a classification fires.

    equilibria is a list of (name, field) pairs; convergence requires
    both L2 distance to one of them and the stationary residual to drop
    below conv_tol.  Growth requires the L2 norm to pass the cutoff while
    increasing over the trailing 10 samples.  'undecided' is a valid
    outcome."""
    u = np.asarray(u0, dtype=float).copy()
    t = 0.0
    dt = cfg.dt if cfg.dt is not None else dt_policy(params, u)
    solve = _implicit_factor(grid, dt)

    times, energies, l2s, h1s, uts, sides, fields = [], [], [], [], [], [], []
    st_t, st_e, st_d, st_dt = [], [], [], []
    classification, which = "undecided", None

    def sample(ut_norm):
        times.append(t)
        energies.append(energy(grid, params, u))
        l2s.append(l2_norm(grid, u))
        h1s.append(np.sqrt(h1_seminorm_sq(grid, u)))
        uts.append(ut_norm)
        sides.append(classify(grid, params, u).nehari_side)
        fields.append(u.copy())

    sample(0.0)
    nstep = 0
    ref_sup = float(np.abs(u).max())
    while t < cfg.horizon - 1e-14:
        sup = float(np.abs(u).max())
        stale = sup > 1.25 * ref_sup or sup < 0.8 * ref_sup
        if cfg.dt is None and (nstep % 100 == 0 or stale):
            ref_sup = sup
            new_dt = dt_policy(params, u)
            if abs(new_dt - dt) > 0.1 * dt:
                dt = new_dt
                solve = _implicit_factor(grid, dt)
        dt_eff = min(dt, cfg.horizon - t)
        if dt_eff < dt * (1.0 - 1e-12):
            u_new = step(grid, params, u, dt_eff)
        else:
            dt_eff = dt
            u_new = step(grid, params, u, dt, solve)
        st_t.append(t)
        st_e.append(energy(grid, params, u))
        st_d.append(l2_norm(grid, u_new - u) ** 2 / dt_eff)
        st_dt.append(dt_eff)
        last_ut = l2_norm(grid, u_new - u) / dt_eff
        u = u_new
        t += dt_eff
        nstep += 1

        if nstep % cfg.stride == 0 or t >= cfg.horizon - 1e-14:
            sample(last_ut)
            for name, e_field in equilibria:
                if l2_norm(grid, u - e_field) <= conv_tol and \
                        l2_norm(grid, residual_field(grid, params, u)) <= conv_tol:
                    classification, which = "converged", name
                    break
            if classification == "converged":
                break
            if l2s[-1] >= cfg.growth_cutoff and len(l2s) >= 10 and \
                    np.all(np.diff(l2s[-10:]) > 0):
                classification = "growing"
                break

    st_e.append(energy(grid, params, u))
    return TrajectoryRecord(
        times=np.array(times), energies=np.array(energies),
        l2_norms=np.array(l2s), h1_norms=np.array(h1s),
        ut_norms=np.array(uts), nehari_sides=sides, sample_fields=fields,
        final_field=u, classification=classification, equilibrium=which,
        step_times=np.array(st_t), step_energies=np.array(st_e),
        step_dissipation=np.array(st_d), step_dts=np.array(st_dt))


def lyapunov_check(record: TrajectoryRecord, dt: float | None = None,
                   mono_constant: float = 50.0) -> LyapunovReport:
    """Per-step dissipation identity and monotonicity of the energy.

    The defect | I(u+) - I(u) + dt * ||(u+ - u)/dt||^2 | is O(dt^2) per
    step; monotonicity is enforced within mono_constant * dt^2."""
    if len(record.step_energies) < 2:
        raise ValueError("need at least two steps")
    dE = np.diff(record.step_energies)
    dts = record.step_dts
    defects = np.abs(dE + record.step_dissipation)   # dissipation = dt*||du/dt||^2
    max_defect = float(defects.max())
    dt_ref = float(dt) if dt is not None else float(dts.max())
    c = max_defect / dt_ref ** 2
    bad = np.flatnonzero(dE > mono_constant * dts ** 2)
    report = LyapunovReport(max_identity_defect=max_defect,
                            identity_constant=c,
                            monotone=bad.size == 0,
                            violations=bad.tolist())
    if bad.size:
        raise MonotonicityViolation(bad.tolist())
    return report


def stable_probe(grid: Grid, params: ProblemParams, ustar: np.ndarray,
                 i: int, eps: float, cfg: StepperConfig | None = None,
                 k: int | None = None) -> StableProbeResult:
    """First-order probe of the stable directions at an equilibrium.

    Perturbs along the i-th eigenfield of the linearization (1-based,
    must satisfy i > Morse count and mu_i > 0), compares the measured
    Nehari value J(u* + eps psi_i) against the prediction eps * mu_i * a_i
    with a_i = int u* psi_i, and records dwell time near u* if a stepper
    config is supplied."""
    if k is None:
        k = max(i + 1, 6)
    spec = linearized_spectrum(grid, params, ustar, k=min(k, grid.n_nodes))
    try:
        q = morse_count(spec)
    except Exception as exc:
        raise NoUnstableEigenvalueComputed(str(exc)) from exc
    if i <= q:
        raise ValueError(f"need i > Morse count q={q}, got i={i}")
    mu = float(spec.eigenvalues[i - 1])
    if mu <= 0:
        raise ValueError(f"mu_{i} = {mu:.4g} is not positive")
    psi = spec.eigenfields[i - 1]
    a = grid.cell * float(ustar @ psi)
    prediction = eps * mu * a

    from .nehari import nehari_J
    u0 = ustar + eps * psi
    measured = nehari_J(grid, params, u0)
    defect = abs(measured - prediction)

    dwell = 0.0
    if cfg is not None:
        record = evolve(grid, params, u0, cfg, equilibria=[])
        delta = 10.0 * abs(eps)
        near = np.array([l2_norm(grid, s - ustar) <= delta
                         for s in record.sample_fields])
        if near.any():
            inside = record.times[near]
            dwell = float(inside.max() - inside.min())
    return StableProbeResult(index=i, mu=mu, a=a, prediction=prediction,
                             measured_J=measured, defect=defect,
                             dwell_time=dwell, eps=eps)


def basin_scan(grid: Grid, params: ProblemParams, seeds,
               cfg: StepperConfig, equilibria: list) -> list[BasinRow]:
    """Evolve each (id, field) seed and tabulate outcome vs initial
    Nehari labels."""
    rows = []
    for seed_id, u0 in seeds:
        report = classify(grid, params, u0)
        record = evolve(grid, params, u0, cfg, equilibria)
        rows.append(BasinRow(seed_id=str(seed_id),
                             nehari_side=report.nehari_side,
                             l_class=report.l_class, b_class=report.b_class,
                             classification=record.classification,
                             equilibrium=record.equilibrium,
                             final_energy=float(record.energies[-1])))
    return rows
