"""Eigenpairs of the Dirichlet Laplacian on the domain, on the marked
subdomain, and of the linearization at a stationary state.

All eigenfields are L2-normalized under the grid quadrature and carry a
residual check.  The linearized operator at a state phi is

    u  ->  -Lap u - (lambda + nu * b * |phi|^(nu-1)) u,

whose nonpositive eigenvalue count is the Morse count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .domain import Grid, l2_norm

__all__ = [
    "SpectrumResult",
    "LinearizedOperator",
    "EigenSolveError",
    "InconclusiveMorseCount",
    "dirichlet_spectrum",
    "subdomain_spectrum",
    "linearized_operator",
    "linearized_spectrum",
    "morse_count",
]

# dense solves below this size; shift-and-invert Lanczos above
_DENSE_LIMIT = 1500
_RESIDUAL_TOL = 1e-8


class EigenSolveError(RuntimeError):
    def __init__(self, index, message):
        self.index = index
        super().__init__(f"eigensolve failed at index {index}: {message}")


class InconclusiveMorseCount(RuntimeError):
    """All computed eigenvalues are <= 0; the count is not certified."""


@dataclass(frozen=True, eq=False)
class SpectrumResult:
    """Ordered eigenpairs with residuals for a self-adjoint operator."""

    eigenvalues: np.ndarray   # (k,) nondecreasing
    eigenfields: np.ndarray   # (k, n_nodes), L2-normalized rows
    residuals: np.ndarray     # (k,)
    operator: str

    def __post_init__(self):
        ev = np.asarray(self.eigenvalues, dtype=float)
        if np.any(np.diff(ev) < 0):
            raise ValueError("eigenvalues must be nondecreasing")
        if np.any(np.asarray(self.residuals) > _RESIDUAL_TOL *
                  np.maximum(1.0, np.abs(ev))):
            raise ValueError("eigenpair residual exceeds tolerance")

    @property
    def k(self) -> int:
        return len(self.eigenvalues)


def _symmetric_smallest(matrix: sp.spmatrix, k: int, grid: Grid):
    """k smallest eigenpairs of a sparse symmetric matrix; returns
    (values, quadrature-normalized fields, residuals)."""
    n = matrix.shape[0]
    if k < 1 or k > n:
        raise ValueError(f"need 1 <= k <= {n}, got {k}")
    if n <= _DENSE_LIMIT:
        vals, vecs = scipy.linalg.eigh(matrix.toarray(),
                                       subset_by_index=[0, k - 1])
    else:
        # shift below the smallest eigenvalue (Gershgorin), then
        # shift-and-invert Lanczos; deterministic start vector
        m = matrix.tocsr()
        diag = m.diagonal()
        row_abs = np.asarray(np.abs(m).sum(axis=1)).ravel() - np.abs(diag)
        sigma = float((diag - row_abs).min()) - 1.0
        v0 = np.ones(n) / np.sqrt(n)
        try:
            vals, vecs = spla.eigsh(m, k=k, sigma=sigma, which="LM", v0=v0)
        except spla.ArpackNoConvergence as exc:
            raise EigenSolveError(len(exc.eigenvalues), str(exc)) from exc
        order = np.argsort(vals)
        vals, vecs = vals[order], vecs[:, order]

    cell_on_grid = grid.cell
    fields = vecs.T / np.sqrt(cell_on_grid)          # quadrature-normalized
    residuals = np.empty(k)
    for i in range(k):
        r = matrix @ fields[i] - vals[i] * fields[i]
        residuals[i] = np.sqrt(cell_on_grid) * np.linalg.norm(r)
    return vals, fields, residuals


def _fix_signs(grid: Grid, fields: np.ndarray) -> None:
    """First field: positive integral; others: first sizeable entry > 0."""
    for i in range(fields.shape[0]):
        f = fields[i]
        if i == 0:
            s = grid.weights @ f
        else:
            big = np.flatnonzero(np.abs(f) > 1e-12 * np.abs(f).max())
            s = f[big[0]] if big.size else 1.0
        if s < 0:
            fields[i] = -f


def dirichlet_spectrum(grid: Grid, k: int) -> SpectrumResult:
    """k smallest Dirichlet eigenpairs of -Lap on the full domain."""
    vals, fields, res = _symmetric_smallest(grid.lap, k, grid)
    _fix_signs(grid, fields)
    return SpectrumResult(vals, fields, res, "dirichlet(Omega)")


def subdomain_spectrum(grid: Grid, k: int) -> SpectrumResult:
    """Eigenpairs of -Lap restricted to the Omega0 nodes (Dirichlet on
    the complement), eigenfields extended by zero to the whole grid."""
    idx = np.flatnonzero(grid.omega0_mask)
    if idx.size == 0:
        raise ValueError("Omega0 mask is empty")
    sub = grid.lap[idx][:, idx]
    vals, sub_fields, res = _symmetric_smallest(sub, k, grid)
    fields = np.zeros((len(vals), grid.n_nodes))
    fields[:, idx] = sub_fields
    _fix_signs(grid, fields)
    # residuals recomputed on the full grid: the zero extension feeds the
    # operator across the Omega0 boundary only through masked-out rows
    for i in range(len(vals)):
        r = sub @ fields[i][idx] - vals[i] * fields[i][idx]
        res[i] = np.sqrt(grid.cell) * np.linalg.norm(r)
    return SpectrumResult(vals, fields, res, "dirichlet(Omega0)")


@dataclass(frozen=True, eq=False)
class LinearizedOperator:
    """Linearization -Lap - coeff at a base state; coeff per node."""

    state: np.ndarray
    coeff: np.ndarray

    def matrix(self, grid: Grid) -> sp.csr_matrix:
        return sp.csr_matrix(grid.lap - sp.diags(self.coeff))


def linearized_operator(grid: Grid, params, state: np.ndarray) -> LinearizedOperator:
    """Coefficient lambda + nu*b*|state|^(nu-1); |0|^(nu-1) = 0 for nu > 1,
    so nodes where the state vanishes need no regularization."""
    coeff = params.lam + params.nu * params.b * np.abs(state) ** (params.nu - 1.0)
    if not np.all(np.isfinite(coeff)):
        raise ValueError("linearized coefficient is not finite")
    return LinearizedOperator(state=np.asarray(state, float), coeff=coeff)


def linearized_spectrum(grid: Grid, params, state: np.ndarray,
                        k: int) -> SpectrumResult:
    """k smallest eigenpairs of the linearization at the given state."""
    op = linearized_operator(grid, params, state)
    vals, fields, res = _symmetric_smallest(op.matrix(grid), k, grid)
    _fix_signs(grid, fields)
    return SpectrumResult(vals, fields, res, "linearized")


def morse_count(spec: SpectrumResult) -> int:
    """Number of nonpositive eigenvalues; requires the largest computed
    eigenvalue to be positive so the count is certified."""
    ev = np.asarray(spec.eigenvalues)
    if ev[-1] <= 0:
        raise InconclusiveMorseCount(
            f"all {len(ev)} computed eigenvalues are <= 0; compute more")
    return int(np.count_nonzero(ev <= 0))
