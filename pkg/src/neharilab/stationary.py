"""Equilibria of -Lap u = lambda u + b |u|^(nu-1) u: the positive
minimizer, nonexistence probing above the subdomain threshold, and the
constrained mountain-pass (sign-changing) solution.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage
import scipy.sparse.linalg as spla

from .domain import Grid, h1_seminorm_sq, l2_norm
from .nehari import (NehariReport, NotProjectable, ProblemParams, classify,
                     energy, grad_energy, odd_power, project_to_nehari,
                     quad_scalars)
from .spectral import (dirichlet_spectrum, linearized_operator,
                       linearized_spectrum, morse_count, subdomain_spectrum)

__all__ = [
    "EquilibriumResult",
    "PathSpec",
    "ProbeReport",
    "SolverError",
    "NoConvergence",
    "ConvergedToZero",
    "NotPositive",
    "NotInRange",
    "FoundPositiveEquilibrium",
    "PathNotProjectable",
    "CollapseToEndpoint",
    "newton_solve",
    "solve_positive",
    "nonexistence_probe",
    "build_mp_path",
    "mountain_pass",
    "sign_domains",
]


class SolverError(RuntimeError):
    pass


class NoConvergence(SolverError):
    def __init__(self, residual, iterations):
        self.residual = residual
        self.iterations = iterations
        super().__init__(f"no convergence after {iterations} iterations "
                         f"(residual {residual:.3e})")


class ConvergedToZero(SolverError):
    """Newton landed on the trivial equilibrium."""


class NotPositive(SolverError):
    """Newton converged, but not to a nodewise positive field."""

    def __init__(self, field_value, residual):
        self.field = field_value
        self.residual = residual
        super().__init__("converged field leaves the positive cone")


class NotInRange(SolverError):
    """lambda is outside (lambda_1(Omega), lambda_1(Omega_0))."""


class FoundPositiveEquilibrium(RuntimeError):
    """A positive equilibrium where none should exist; carries the field.

    Signals a discretization artifact or a bug, never silent."""

    def __init__(self, field_value, residual):
        self.field = field_value
        self.residual = residual
        super().__init__(
            f"positive equilibrium found above the threshold "
            f"(residual {residual:.3e}); discrete artifact or bug")


class PathNotProjectable(RuntimeError):
    def __init__(self, s, A, B):
        self.s = s
        self.A = A
        self.B = B
        super().__init__(f"path sample at s={s:.4f} not projectable "
                         f"(A={A:.4g}, B={B:.4g}); shrink eps or t1/t2")


class CollapseToEndpoint(SolverError):
    def __init__(self, trace):
        self.trace = trace
        super().__init__("deformation collapsed into an endpoint "
                         f"after {len(trace)} sweeps")


@dataclass(frozen=True, eq=False)
class EquilibriumResult:
    field: np.ndarray
    residual_norm: float
    energy: float
    nehari_report: NehariReport
    sign_domains: int
    morse_index: int
    iterations: int


@dataclass(frozen=True)
class PathSpec:
    """Parameters of the explicit path from phi to -phi used for the
    constrained min-max search."""

    t1: float = 0.1
    t2: float = 0.1
    eps: float = 0.05
    samples_per_segment: int = 33

    def __post_init__(self):
        if self.t1 <= 0 or self.t2 <= 0 or self.eps <= 0:
            raise ValueError("t1, t2, eps must be positive")
        if self.samples_per_segment < 8:
            raise ValueError("need >= 8 samples per segment")


@dataclass(frozen=True, eq=False)
class ProbeReport:
    """Outcome of the nonexistence probe above the subdomain threshold."""

    attempts: list           # one outcome string per initialization
    growth_stat: float       # sup_t of the L2(Omega0) norm on the horizon
    l2_omega0_series: np.ndarray
    times: np.ndarray


def residual_field(grid: Grid, params: ProblemParams, u: np.ndarray) -> np.ndarray:
    return grid.lap @ u - params.lam * u - params.b * odd_power(u, params.nu)


def newton_solve(grid: Grid, params: ProblemParams, init: np.ndarray,
                 tol: float = 1e-9, max_iter: int = 80):
    """Damped Newton on the stationary residual with backtracking on its
    squared L2 norm.  Returns (field, residual_norm, iterations)."""
    u = np.asarray(init, dtype=float).copy()
    res = residual_field(grid, params, u)
    rnorm = l2_norm(grid, res)
    for it in range(1, max_iter + 1):
        if rnorm <= tol:
            return u, rnorm, it - 1
        jac = linearized_operator(grid, params, u).matrix(grid)
        try:
            delta = spla.spsolve(jac.tocsc(), -res)
        except RuntimeError as exc:      # singular Jacobian
            raise NoConvergence(rnorm, it) from exc
        if not np.all(np.isfinite(delta)):
            raise NoConvergence(rnorm, it)
        step = 1.0
        for _ in range(40):
            trial = u + step * delta
            trial_res = residual_field(grid, params, trial)
            trial_norm = l2_norm(grid, trial_res)
            if trial_norm < rnorm * (1.0 - 1e-4 * step) or trial_norm <= tol:
                break
            step *= 0.5
        else:
            raise NoConvergence(rnorm, it)
        u, res, rnorm = trial, trial_res, trial_norm
    if rnorm <= tol:
        return u, rnorm, max_iter
    raise NoConvergence(rnorm, max_iter)


def default_positive_init(grid: Grid, params: ProblemParams) -> np.ndarray:
    """First eigenfield at unit H1 seminorm, pushed onto the manifold
    when its ray crosses it."""
    phi1 = dirichlet_spectrum(grid, 1).eigenfields[0]
    phi1 = phi1 / np.sqrt(h1_seminorm_sq(grid, phi1))
    try:
        _, init = project_to_nehari(grid, params, phi1)
    except NotProjectable:
        init = phi1
    return init


def _equilibrium_result(grid, params, u, rnorm, iterations) -> EquilibriumResult:
    spec = linearized_spectrum(grid, params, u, k=min(6, grid.n_nodes))
    return EquilibriumResult(
        field=u,
        residual_norm=rnorm,
        energy=energy(grid, params, u),
        nehari_report=classify(grid, params, u),
        sign_domains=sign_domains(grid, u),
        morse_index=morse_count(spec),
        iterations=iterations,
    )


def solve_positive(grid: Grid, params: ProblemParams,
                   init: np.ndarray | None = None, tol: float = 1e-9,
                   max_iter: int = 80, check_range: bool = True) -> EquilibriumResult:
    """Positive equilibrium by damped Newton.

    Requires lambda_1(Omega) < lambda < lambda_1(Omega_0) unless
    check_range is disabled (nonexistence probing forces runs outside
    the window).  Raises ConvergedToZero, NotPositive, NoConvergence, or
    NotInRange.
    """
    if check_range:
        lam1 = dirichlet_spectrum(grid, 1).eigenvalues[0]
        lam1_sub = subdomain_spectrum(grid, 1).eigenvalues[0]
        if not (lam1 < params.lam < lam1_sub):
            raise NotInRange(
                f"lambda={params.lam:.6g} outside "
                f"({lam1:.6g}, {lam1_sub:.6g})")
    supplied = init is not None
    if init is None:
        init = default_positive_init(grid, params)
    else:
        # manifold projection is the natural amplitude normalization:
        # it moves under- or over-scaled data into Newton's basin
        try:
            _, init = project_to_nehari(grid, params, init)
        except NotProjectable:
            pass

    def attempt(u0):
        u, rnorm, iterations = newton_solve(grid, params, u0, tol=tol,
                                            max_iter=max_iter)
        if l2_norm(grid, u) < 1e-8:
            raise ConvergedToZero("Newton converged to the trivial "
                                  "equilibrium")
        if not (np.all(u > 0) or np.all(u < 0)):
            raise NotPositive(u, rnorm)
        return _equilibrium_result(grid, params, u, rnorm, iterations)

    try:
        return attempt(init)
    except (ConvergedToZero, NotPositive, NoConvergence):
        if not supplied:
            raise
        # flow preconditioning: a short parabolic run pulls arbitrary
        # positive data toward the attracting equilibrium before Newton
        from .parabolic import StepperConfig, evolve  # local: avoid cycle
        cfg = StepperConfig(horizon=2.0, stride=200)
        record = evolve(grid, params, np.asarray(init, float), cfg,
                        equilibria=[])
        return attempt(record.final_field)


def nonexistence_probe(grid: Grid, params: ProblemParams, m: int = 5,
                       horizon: float = 3.0, rng=None,
                       growth_cutoff: float = 1e3) -> ProbeReport:
    """Hunt for a positive equilibrium where the threshold forbids one.

    Requires lambda >= lambda_1(Omega_0); runs Newton from m positive
    initializations plus a parabolic run from positive data, and raises
    FoundPositiveEquilibrium loudly on any success."""
    from .parabolic import StepperConfig, evolve  # local: avoid cycle

    lam1_sub = subdomain_spectrum(grid, 1).eigenvalues[0]
    lam1 = dirichlet_spectrum(grid, 1).eigenvalues[0]
    if params.lam < lam1_sub:
        raise NotInRange(
            f"lambda={params.lam:.6g} < lambda_1(Omega_0)={lam1_sub:.6g}; "
            "use solve_positive in the admissible window")
    if rng is None:
        rng = np.random.default_rng(0)

    phi1 = dirichlet_spectrum(grid, 1).eigenfields[0]
    inits = [0.1 * phi1]
    for _ in range(m - 1):
        inits.append(rng.uniform(0.05, 1.0, grid.n_nodes))

    attempts = []
    for init in inits:
        try:
            result = solve_positive(grid, params, init=init,
                                    check_range=False)
        except (NoConvergence, ConvergedToZero, NotPositive) as exc:
            attempts.append(type(exc).__name__)
            continue
        if np.all(result.field > 0):
            raise FoundPositiveEquilibrium(result.field, result.residual_norm)
        attempts.append("NotPositive")

    cfg = StepperConfig(dt=None, horizon=horizon, stride=5,
                        growth_cutoff=growth_cutoff)
    record = evolve(grid, params, 0.1 * phi1, cfg, equilibria=[])
    cell = np.sqrt(grid.cell)
    sub_norms = np.array([cell * np.linalg.norm(s[grid.omega0_mask])
                          for s in record.sample_fields])
    return ProbeReport(attempts=attempts, growth_stat=float(sub_norms.max()),
                       l2_omega0_series=sub_norms, times=record.times)


def build_mp_path(grid: Grid, params: ProblemParams, phi: np.ndarray,
                  spec: PathSpec = PathSpec()) -> list[np.ndarray]:
    """Sampled path from phi to -phi, every sample projected onto the
    manifold.

    Segment 1 walks from phi to w1 = t1*(phi_1 + eps*phi_1^0), segment 2
    rotates w_theta = cos(theta) w1 + sin(theta) w2 through theta in
    [0, pi], segment 3 walks from -w1 to -phi.  Raises PathNotProjectable
    if any sample misses the A < 0, B < 0 sign pattern."""
    omega_modes = dirichlet_spectrum(grid, 2).eigenfields
    sub_modes = subdomain_spectrum(grid, 2).eigenfields
    w1 = spec.t1 * (omega_modes[0] + spec.eps * sub_modes[0])
    w2 = spec.t2 * (omega_modes[1] + spec.eps * sub_modes[1])

    m = spec.samples_per_segment
    samples = []
    s_values = []
    for s in np.linspace(0.0, 1.0 / 3.0, m, endpoint=False):
        samples.append((1.0 - 3.0 * s) * phi + 3.0 * s * w1)
        s_values.append(s)
    for s in np.linspace(1.0 / 3.0, 2.0 / 3.0, m, endpoint=False):
        theta = 3.0 * (s - 1.0 / 3.0) * np.pi
        samples.append(np.cos(theta) * w1 + np.sin(theta) * w2)
        s_values.append(s)
    for s in np.linspace(2.0 / 3.0, 1.0, m + 1):
        samples.append(3.0 * (1.0 - s) * (-w1) + 3.0 * (s - 2.0 / 3.0) * (-phi))
        s_values.append(s)

    projected = []
    for s, w in zip(s_values, samples):
        try:
            _, proj = project_to_nehari(grid, params, w)
        except NotProjectable as exc:
            raise PathNotProjectable(s, exc.A, exc.B) from exc
        projected.append(proj)
    return projected


def _tangent_gradient(grid, params, u):
    """Free L2 gradient minus its component along grad J (manifold
    tangent projection)."""
    g = grad_energy(grid, params, u)
    n = 2.0 * (grid.lap @ u - params.lam * u) \
        - (params.nu + 1.0) * params.b * odd_power(u, params.nu)
    nn = grid.cell * float(n @ n)
    if nn == 0.0:
        return g
    return g - (grid.cell * float(g @ n) / nn) * n


def _reparametrize(grid, samples):
    """Resample the polyline uniformly in cumulative H1 arc length."""
    pts = np.asarray(samples)
    seglen = np.array([np.sqrt(h1_seminorm_sq(grid, pts[i + 1] - pts[i]))
                       for i in range(len(pts) - 1)])
    arc = np.concatenate([[0.0], np.cumsum(seglen)])
    if arc[-1] == 0.0:
        return samples
    targets = np.linspace(0.0, arc[-1], len(pts))
    out = [pts[0]]
    for t in targets[1:-1]:
        j = int(np.searchsorted(arc, t, side="right") - 1)
        j = min(j, len(pts) - 2)
        w = (t - arc[j]) / max(arc[j + 1] - arc[j], 1e-300)
        out.append((1.0 - w) * pts[j] + w * pts[j + 1])
    out.append(pts[-1])
    return out


def mountain_pass(grid: Grid, params: ProblemParams,
                  path: list[np.ndarray], tol: float = 1e-7,
                  grad_tol: float = 1e-3, max_sweeps: int = 400,
                  step_fraction: float = 0.1) -> EquilibriumResult:
    """Min-max search by path deformation on the manifold.

    Every interior sample takes a descent step along the tangent-projected
    negative gradient, is re-projected onto the manifold, and the path is
    re-parametrized by H1 arc length; the loop stops once the energy
    maximizer's tangent gradient is small, then Newton polishes the
    maximizer into an equilibrium."""
    phi = path[0]
    samples = [np.asarray(p, float).copy() for p in path]
    d_low = min(energy(grid, params, samples[0]),
                energy(grid, params, samples[-1]))
    trace = []

    for sweep in range(max_sweeps):
        for i in range(1, len(samples) - 1):
            u = samples[i]
            g = _tangent_gradient(grid, params, u)
            gnorm = l2_norm(grid, g)
            if gnorm == 0.0:
                continue
            e0 = energy(grid, params, u)
            step = step_fraction
            for _ in range(20):
                try:
                    _, trial = project_to_nehari(grid, params, u - step * g)
                except NotProjectable:
                    step *= 0.5
                    continue
                if energy(grid, params, trial) <= e0:
                    samples[i] = trial
                    break
                step *= 0.5
        samples = _reparametrize(grid, samples)
        for i in range(1, len(samples) - 1):
            try:
                _, samples[i] = project_to_nehari(grid, params, samples[i])
            except NotProjectable:
                pass  # keep the unprojected interpolant; next sweep fixes it

        energies = [energy(grid, params, u) for u in samples]
        imax = int(np.argmax(energies))
        gmax = l2_norm(grid, _tangent_gradient(grid, params, samples[imax]))
        trace.append((sweep, imax, energies[imax], gmax))
        if imax in (0, len(samples) - 1):
            raise CollapseToEndpoint(trace)
        if gmax <= grad_tol:
            break
        # once the min-max level has settled, certify the maximizer by a
        # Newton polish: accept only a genuine non-endpoint equilibrium
        # whose critical value matches the level reached by the path
        if sweep >= 2:
            try:
                u, rnorm, its = newton_solve(grid, params, samples[imax],
                                             tol=min(tol, 1e-9), max_iter=30)
            except NoConvergence:
                continue
            if l2_norm(grid, u) < 1e-8 or \
                    min(l2_norm(grid, u - phi), l2_norm(grid, u + phi)) < 1e-6:
                continue
            e_crit = energy(grid, params, u)
            if e_crit > d_low and \
                    abs(e_crit - energies[imax]) <= 2e-2 * abs(e_crit):
                result = _equilibrium_result(grid, params, u, rnorm, its)
                return result

    candidate = samples[imax]
    u, rnorm, iterations = newton_solve(grid, params, candidate, tol=min(tol, 1e-9))
    if l2_norm(grid, u) < 1e-8:
        raise CollapseToEndpoint(trace)
    if min(l2_norm(grid, u - phi), l2_norm(grid, u + phi)) < 1e-6:
        raise CollapseToEndpoint(trace)
    result = _equilibrium_result(grid, params, u, rnorm, iterations)
    if result.energy <= d_low:
        raise NoConvergence(rnorm, iterations)
    return result


def sign_domains(grid: Grid, u: np.ndarray) -> int:
    """Connected components of {u > theta} plus of {u < -theta} under
    grid adjacency, with theta = 1e-8 * max|u|."""
    if not np.any(u):
        return 0
    theta = 1e-8 * np.abs(u).max()
    count = 0
    for mask in (u > theta, u < -theta):
        shaped = mask.reshape(grid.shape)
        _, num = ndimage.label(shaped)
        count += int(num)
    return count
