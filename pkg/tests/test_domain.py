"""Grids, masks, weights, quadrature, and the discrete Laplacian."""

import numpy as np
import pytest

import neharilab as nl
from conftest import OMEGA0, make_grid


def test_domain_spec_validation():
    with pytest.raises(ValueError):
        nl.DomainSpec(3, (1.0,), (9,), OMEGA0)
    with pytest.raises(ValueError):
        nl.DomainSpec(1, (1.0,), (2,), OMEGA0)
    with pytest.raises(ValueError):
        nl.DomainSpec(1, (1.0,), (9,), ((0.0, 0.5),))     # touches boundary
    with pytest.raises(ValueError):
        nl.DomainSpec(1, (1.0,), (9,), ((0.7, 0.4),))     # empty box
    with pytest.raises(ValueError):
        nl.DomainSpec(2, (1.0, 1.0), (9, 9), OMEGA0)      # one pair, 2 axes


def test_grid_geometry():
    g = make_grid(99)
    assert g.h == (0.01,)
    assert g.n_nodes == 99
    assert g.cell == pytest.approx(0.01)
    assert np.allclose(g.coords[:, 0], 0.01 * np.arange(1, 100))
    # nodes strictly inside (0.4, 0.7): x = 0.41 .. 0.69
    assert int(g.omega0_mask.sum()) == 29


def test_laplacian_stencil():
    g = make_grid(3)          # h = 0.25
    u = np.array([0.0, 1.0, 0.0])
    assert np.allclose(nl.laplacian_apply(g, u), [-16.0, 32.0, -16.0])
    assert nl.h1_seminorm_sq(g, u) == pytest.approx(8.0)


def test_laplacian_symmetry_2d():
    spec = nl.DomainSpec(2, (1.0, 1.0), (9, 9), ((0.4, 0.7), (0.4, 0.7)))
    g = nl.build_grid(spec)
    assert g.n_nodes == 81
    dense = g.lap.toarray()
    assert np.allclose(dense, dense.T)
    # interior node far from the boundary: row applies the 5-point stencil
    i = 4 * 9 + 4
    u = np.zeros(81)
    u[i] = 1.0
    h2 = g.h[0] ** 2
    assert nl.laplacian_apply(g, u)[i] == pytest.approx(4.0 / h2)


def test_quadrature():
    g = make_grid(99)
    assert nl.integrate(g, np.ones(99)) == pytest.approx(0.99)
    e = np.zeros(99)
    e[3] = 1.0
    assert nl.l2_norm(g, e) == pytest.approx(np.sqrt(0.01))
    # sin(pi x): int over (0,1) of sin^2 = 1/2, second-order quadrature
    u = np.sin(np.pi * g.coords[:, 0])
    assert nl.integrate(g, u * u) == pytest.approx(0.5, abs=1e-3)


def test_weight_plateau():
    g = make_grid(99)
    b = nl.build_weight(g, nl.WeightSpec("plateau", 2.5))
    assert np.all(b <= 0)
    assert np.all(b[g.omega0_mask] == 0.0)
    dist = g.distance_to_omega0(g.coords)
    assert np.all(b[dist > 0] == -2.5)    # full amplitude off the closure
    assert np.all(b[dist == 0] == 0.0)    # vanishes on the closed box


def test_weight_ramp():
    g = make_grid(99)
    b = nl.build_weight(g, nl.WeightSpec("ramp", 1.0, delta=0.1))
    assert np.all(b <= 0)
    assert np.all(b[g.omega0_mask] == 0.0)
    x = g.coords[:, 0]
    far = x < 0.25                      # distance > delta: full amplitude
    assert np.all(b[far] == -1.0)
    near = (x > 0.7) & (x < 0.8)        # inside the ramp: strictly between
    assert np.all((b[near] > -1.0) & (b[near] < 0.0))
    # delta = 0 degenerates to the plateau profile
    b0 = nl.build_weight(g, nl.WeightSpec("ramp", 1.0, delta=0.0))
    plateau = nl.build_weight(g, nl.WeightSpec("plateau", 1.0))
    assert np.array_equal(b0, plateau)


def test_weight_custom():
    g = make_grid(99)
    table = np.where(g.omega0_mask, 0.0, -0.5)
    b = nl.build_weight(g, nl.WeightSpec("custom", table=table))
    assert np.array_equal(b, table)
    with pytest.raises(ValueError):
        nl.build_weight(g, nl.WeightSpec("custom", table=-table))  # positive
    bad = table.copy()
    bad[g.omega0_mask] = -0.1          # must vanish on Omega0
    with pytest.raises(ValueError):
        nl.build_weight(g, nl.WeightSpec("custom", table=bad))


def test_distance_to_omega0():
    g = make_grid(99)
    d = g.distance_to_omega0(np.array([[0.2], [0.5], [0.9]]))
    assert np.allclose(d, [0.2, 0.0, 0.2])
