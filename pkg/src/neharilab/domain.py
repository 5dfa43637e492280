"""Uniform tensor grids on a box domain with a marked interior subdomain.

The domain is a rectangle (0, L1) x ... x (0, Ld) with homogeneous
Dirichlet boundary.  Fields live on the interior nodes only, ordered
row-major (axis 0 slowest).  The subdomain Omega0 is an axis-aligned box
strictly inside the domain; the weight b(x) <= 0 vanishes on Omega0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

__all__ = [
    "DomainSpec",
    "WeightSpec",
    "Grid",
    "build_grid",
    "build_weight",
    "laplacian_apply",
    "integrate",
    "h1_seminorm_sq",
    "l2_norm",
]


def _as_tuple(value, dim, cast):
    if np.isscalar(value):
        return tuple(cast(value) for _ in range(dim))
    out = tuple(cast(v) for v in value)
    if len(out) != dim:
        raise ValueError(f"expected {dim} per-axis values, got {len(out)}")
    return out


@dataclass(frozen=True)
class DomainSpec:
    """Geometry: box extent, interior resolution, and the Omega0 box.

    omega0 is one (lo, hi) pair per axis; its closure must be strictly
    inside the domain and it must have positive measure.
    """

    dimension: int
    extent: tuple
    resolution: tuple
    omega0: tuple

    def __post_init__(self):
        if self.dimension not in (1, 2):
            raise ValueError("dimension must be 1 or 2")
        object.__setattr__(self, "extent", _as_tuple(self.extent, self.dimension, float))
        object.__setattr__(self, "resolution", _as_tuple(self.resolution, self.dimension, int))
        box = self.omega0
        if self.dimension == 1 and len(box) == 2 and np.isscalar(box[0]):
            box = (tuple(box),)
        box = tuple(tuple(float(v) for v in pair) for pair in box)
        object.__setattr__(self, "omega0", box)
        if any(L <= 0 for L in self.extent):
            raise ValueError("extent must be positive")
        if any(n < 3 for n in self.resolution):
            raise ValueError("resolution must be >= 3 interior nodes per axis")
        if len(box) != self.dimension:
            raise ValueError("omega0 needs one (lo, hi) pair per axis")
        for (lo, hi), L in zip(box, self.extent):
            if not (0.0 < lo < hi < L):
                raise ValueError(
                    f"omega0 box ({lo}, {hi}) must be strictly inside (0, {L}) "
                    "with positive measure"
                )


@dataclass(frozen=True)
class WeightSpec:
    """Profile of the nonpositive weight b(x).

    profile 'plateau': b = -amplitude outside the Omega0 closure, 0 on it.
    profile 'ramp':    b = -amplitude * min(1, dist(x, Omega0)/delta).
    profile 'custom':  table gives one value per interior node.
    """

    profile: str = "ramp"
    amplitude: float = 1.0
    delta: float = 0.0
    table: np.ndarray | None = None

    def __post_init__(self):
        if self.profile not in ("ramp", "plateau", "custom"):
            raise ValueError(f"unknown weight profile {self.profile!r}")
        if self.amplitude <= 0:
            raise ValueError("amplitude must be positive")
        if self.delta < 0:
            raise ValueError("delta must be >= 0")
        if self.profile == "custom" and self.table is None:
            raise ValueError("custom profile needs a table")


@dataclass(frozen=True, eq=False)
class Grid:
    """Discretized domain: interior node coordinates, Omega0 mask,
    quadrature weights, and the sparse negative Laplacian.

    Nodes are ordered row-major over the axes; quadrature is the lumped
    rule with weight prod(h) per interior node, so sum(weights) =
    prod(L_i * n_i / (n_i + 1)), one cell layer short of |Omega|.
    """

    spec: DomainSpec
    shape: tuple
    h: tuple
    coords: np.ndarray       # (n_nodes, dim)
    omega0_mask: np.ndarray  # (n_nodes,) bool
    weights: np.ndarray      # (n_nodes,) quadrature weights
    lap: sp.csr_matrix = field(repr=False)  # matrix of -Laplacian

    @property
    def dim(self) -> int:
        return self.spec.dimension

    @property
    def n_nodes(self) -> int:
        return self.coords.shape[0]

    @property
    def cell(self) -> float:
        return float(np.prod(self.h))

    @property
    def omega0_box(self) -> tuple:
        return self.spec.omega0

    def distance_to_omega0(self, x: np.ndarray) -> np.ndarray:
        """Euclidean distance from points x (n, dim) to the Omega0 closure."""
        x = np.atleast_2d(x)
        gaps = np.zeros_like(x)
        for ax, (lo, hi) in enumerate(self.omega0_box):
            gaps[:, ax] = np.maximum.reduce([lo - x[:, ax], x[:, ax] - hi,
                                             np.zeros(x.shape[0])])
        return np.sqrt((gaps ** 2).sum(axis=1))


def build_grid(spec: DomainSpec) -> Grid:
    """Uniform interior grid with h_i = L_i / (n_i + 1) per axis."""
    h = tuple(L / (n + 1) for L, n in zip(spec.extent, spec.resolution))
    axes = [hh * np.arange(1, n + 1) for hh, n in zip(h, spec.resolution)]
    if spec.dimension == 1:
        coords = axes[0][:, None]
    else:
        X = np.meshgrid(*axes, indexing="ij")
        coords = np.column_stack([x.ravel() for x in X])

    mask = np.ones(coords.shape[0], dtype=bool)
    for ax, (lo, hi) in enumerate(spec.omega0):
        mask &= (coords[:, ax] > lo) & (coords[:, ax] < hi)
    if not mask.any():
        raise ValueError("omega0 box contains no grid nodes; refine the mesh")

    weights = np.full(coords.shape[0], float(np.prod(h)))

    def band(n, hh):
        return sp.diags([-1.0, 2.0, -1.0], [-1, 0, 1], shape=(n, n)) / hh ** 2

    if spec.dimension == 1:
        lap = band(spec.resolution[0], h[0])
    else:
        n0, n1 = spec.resolution
        lap = sp.kron(band(n0, h[0]), sp.identity(n1)) \
            + sp.kron(sp.identity(n0), band(n1, h[1]))
    return Grid(spec=spec, shape=tuple(spec.resolution), h=h, coords=coords,
                omega0_mask=mask, weights=weights, lap=sp.csr_matrix(lap))


def build_weight(grid: Grid, w: WeightSpec) -> np.ndarray:
    """Realize the weight field b on the grid; b <= 0, b = 0 on Omega0."""
    if w.profile == "custom":
        b = np.asarray(w.table, dtype=float)
        if b.shape != (grid.n_nodes,):
            raise ValueError("custom table length must equal the node count")
        if b.max() > 0:
            raise ValueError("custom weight must be nonpositive")
        if np.any(b[grid.omega0_mask] != 0.0):
            raise ValueError("custom weight must vanish on Omega0")
        return b.copy()

    dist = grid.distance_to_omega0(grid.coords)
    if w.profile == "plateau" or w.delta == 0.0:
        # delta = 0 ramp degenerates to the plateau profile
        b = np.where(dist > 0.0, -w.amplitude, 0.0)
    else:
        b = -w.amplitude * np.minimum(1.0, dist / w.delta)
    b[grid.omega0_mask] = 0.0
    return b


def laplacian_apply(grid: Grid, u: np.ndarray) -> np.ndarray:
    """Second-order centered (-Laplacian) with Dirichlet closure."""
    return grid.lap @ u


def integrate(grid: Grid, u: np.ndarray) -> float:
    """Lumped quadrature: sum of nodal values times cell measure."""
    return float(grid.weights @ u)


def h1_seminorm_sq(grid: Grid, u: np.ndarray) -> float:
    """Discrete int |grad u|^2 as the quadratic form u . (-Lap u) . cell."""
    return float(u @ (grid.lap @ u)) * grid.cell


def l2_norm(grid: Grid, u: np.ndarray) -> float:
    """Discrete L2 norm under the grid quadrature."""
    return float(np.sqrt(grid.cell) * np.linalg.norm(u))
