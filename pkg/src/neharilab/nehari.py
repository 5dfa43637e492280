"""Variational toolkit: energy, Nehari functional, fibering maps,
projection onto the manifold, and set classification.

For a field u the two quadrature scalars are

    A(u) = int |grad u|^2 - lambda u^2,
    B(u) = int b |u|^(nu+1)      (<= 0 since b <= 0),

from which J(u) = A - B and I(u) = A/2 - B/(nu+1).  Along the ray t*u the
fibering map is I(tu) = t^2 A/2 - t^(nu+1) B/(nu+1); when A < 0 and B < 0
it has exactly one turning point at t = (A/B)^(1/(nu-1)), which lands the
field on the manifold at a local minimum of the map.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domain import Grid, h1_seminorm_sq, integrate

__all__ = [
    "ProblemParams",
    "NehariReport",
    "FiberSample",
    "NotProjectable",
    "energy",
    "grad_energy",
    "nehari_J",
    "quad_scalars",
    "fiber_scan",
    "project_to_nehari",
    "classify",
    "nehari_energy_identity",
]

# tie band for the L/B classes on unit-norm directions
_ZERO_BAND = 1e-10


@dataclass(frozen=True, eq=False)
class ProblemParams:
    """Growth rate lambda, nonlinearity exponent nu, realized weight b.

    In dimension <= 2 the admissible range is simply nu > 1 (the critical
    exponent is infinite); higher dimensions are outside this package.
    """

    lam: float
    nu: float
    b: np.ndarray

    def __post_init__(self):
        if self.lam <= 0:
            raise ValueError("lambda must be positive")
        if self.nu <= 1:
            raise ValueError("nu must exceed 1")
        if np.asarray(self.b).max() > 0:
            raise ValueError("weight b must be nonpositive")


class NotProjectable(Exception):
    """The ray through u never crosses the manifold at a turning point.

    Carries the (A, B) values so the caller can see which sign condition
    failed; projectability requires A < 0 and B < 0.
    """

    def __init__(self, A, B):
        self.A = A
        self.B = B
        super().__init__(f"not projectable: A={A:.6g}, B={B:.6g} "
                         "(need A < 0 and B < 0)")


@dataclass(frozen=True)
class NehariReport:
    A: float
    B: float
    J: float
    I: float
    nehari_side: str    # 'N+', 'N', 'N-', or 'origin'
    s_class: str        # 'S+', 'S0', 'not-on-manifold', or 'origin'
    l_class: str        # 'L+', 'L0', 'L-' for u/||u||
    b_class: str        # 'B-', 'B0' for u/||u|| (B+ cannot occur)
    projectable: bool
    t_project: float | None


@dataclass(frozen=True)
class FiberSample:
    t: float
    value: float   # I(t u)
    slope: float   # d/dt I(t u) = J(t u)/t


def odd_power(u: np.ndarray, nu: float) -> np.ndarray:
    """|u|^(nu-1) u for possibly non-integer nu; odd and continuous."""
    return np.sign(u) * np.abs(u) ** nu


def quad_scalars(grid: Grid, params: ProblemParams, u: np.ndarray):
    """The pair (A, B) under the grid quadrature."""
    A = h1_seminorm_sq(grid, u) - params.lam * integrate(grid, u * u)
    B = integrate(grid, params.b * np.abs(u) ** (params.nu + 1.0))
    return A, B


def energy(grid: Grid, params: ProblemParams, u: np.ndarray) -> float:
    A, B = quad_scalars(grid, params, u)
    return 0.5 * A - B / (params.nu + 1.0)


def grad_energy(grid: Grid, params: ProblemParams, u: np.ndarray) -> np.ndarray:
    """L2 gradient: -Lap u - lambda u - b |u|^(nu-1) u."""
    return grid.lap @ u - params.lam * u - params.b * odd_power(u, params.nu)


def nehari_J(grid: Grid, params: ProblemParams, u: np.ndarray) -> float:
    A, B = quad_scalars(grid, params, u)
    return A - B


def _tol_manifold(norm_sq: float) -> float:
    return 1e-8 * max(1.0, norm_sq)


def fiber_scan(grid: Grid, params: ProblemParams, u: np.ndarray,
               t_list) -> list[FiberSample]:
    """Closed-form fibering samples via the cached (A, B) of u."""
    if not np.any(u):
        raise ValueError("fiber scan needs u != 0")
    A, B = quad_scalars(grid, params, u)
    nu = params.nu
    out = []
    for t in np.asarray(t_list, dtype=float):
        if t <= 0:
            raise ValueError("fiber parameters must be positive")
        value = 0.5 * t ** 2 * A - t ** (nu + 1.0) * B / (nu + 1.0)
        slope = t * A - t ** nu * B
        out.append(FiberSample(t=float(t), value=value, slope=slope))
    return out


def project_to_nehari(grid: Grid, params: ProblemParams, u: np.ndarray):
    """Scale u onto the manifold: t = (A/B)^(1/(nu-1)) when A, B < 0.

    Raises NotProjectable otherwise; with b <= 0 these are exactly the
    directions whose normalization lies in L- and B-.
    """
    if not np.any(u):
        raise ValueError("cannot project the zero field")
    A, B = quad_scalars(grid, params, u)
    norm_sq = h1_seminorm_sq(grid, u)
    A_hat = A / norm_sq
    B_hat = B / norm_sq ** ((params.nu + 1.0) / 2.0)
    if not (A_hat < -_ZERO_BAND and B_hat < -_ZERO_BAND):
        raise NotProjectable(A, B)
    t = (A / B) ** (1.0 / (params.nu - 1.0))
    return t, t * u


def classify(grid: Grid, params: ProblemParams, u: np.ndarray) -> NehariReport:
    """Full report: quadrature scalars, manifold side, fibering class of
    the point, and L/B class of the H1-normalized direction."""
    A, B = quad_scalars(grid, params, u)
    J = A - B
    I = 0.5 * A - B / (params.nu + 1.0)
    norm_sq = h1_seminorm_sq(grid, u)

    if norm_sq == 0.0:
        return NehariReport(A=0.0, B=0.0, J=0.0, I=0.0, nehari_side="origin",
                            s_class="origin", l_class="L0", b_class="B0",
                            projectable=False, t_project=None)

    # L/B classes live on u/||u||: rescale the homogeneous scalars
    band = _ZERO_BAND
    A_hat = A / norm_sq
    B_hat = B / norm_sq ** ((params.nu + 1.0) / 2.0)
    if abs(A_hat) <= band:
        l_class = "L0"
    else:
        l_class = "L+" if A_hat > 0 else "L-"
    b_class = "B0" if abs(B_hat) <= band else "B-"

    tol = _tol_manifold(norm_sq)
    if abs(J) <= tol:
        nehari_side = "N"
        s_class = "S+" if b_class == "B-" else "S0"
    else:
        nehari_side = "N+" if J > 0 else "N-"
        s_class = "not-on-manifold"

    projectable = (l_class == "L-") and (b_class == "B-")
    t_project = None
    if projectable:
        t_project = (A / B) ** (1.0 / (params.nu - 1.0))
    return NehariReport(A=A, B=B, J=J, I=I, nehari_side=nehari_side,
                        s_class=s_class, l_class=l_class, b_class=b_class,
                        projectable=projectable, t_project=t_project)


def nehari_energy_identity(grid: Grid, params: ProblemParams,
                           u_on_manifold: np.ndarray):
    """On the manifold I(u) = (1/2 - 1/(nu+1)) A(u) = (same) B(u).

    Returns the three values; the caller asserts their agreement."""
    A, B = quad_scalars(grid, params, u_on_manifold)
    J = A - B
    norm_sq = h1_seminorm_sq(grid, u_on_manifold)
    if abs(J) > _tol_manifold(norm_sq):
        raise ValueError(f"field is not on the manifold: J = {J:.6g}")
    factor = 0.5 - 1.0 / (params.nu + 1.0)
    I = 0.5 * A - B / (params.nu + 1.0)
    return I, factor * A, factor * B
