"""Positive equilibria, nonexistence probing, and the mountain-pass
search for the sign-changing solution."""

import numpy as np
import pytest

import neharilab as nl
from neharilab.stationary import (ConvergedToZero, NoConvergence, NotInRange,
                                  PathNotProjectable, default_positive_init,
                                  newton_solve, nonexistence_probe,
                                  residual_field)
from conftest import make_grid, make_params


def test_residual_field_at_equilibrium(grid299, params20, phi20):
    r = residual_field(grid299, params20, phi20.field)
    assert nl.l2_norm(grid299, r) <= 1e-9


def test_newton_solve_from_default_init(grid299, params20):
    init = default_positive_init(grid299, params20)
    u, rnorm, its = newton_solve(grid299, params20, init)
    assert rnorm <= 1e-9
    assert its < 40
    assert np.all(u > 0)


def test_positive_equilibrium_report(phi20):
    assert np.all(phi20.field > 0)
    assert phi20.residual_norm <= 1e-9
    assert phi20.energy < 0
    assert phi20.sign_domains == 1
    assert phi20.morse_index == 0          # stable state
    rep = phi20.nehari_report
    assert rep.nehari_side == "N" and rep.s_class == "S+"


def test_negated_init_gives_negated_solution(grid299, params20, phi20):
    neg = nl.solve_positive(grid299, params20,
                            init=-default_positive_init(grid299, params20))
    assert np.all(neg.field < 0)
    assert np.max(np.abs(neg.field + phi20.field)) < 1e-8


def test_out_of_range_is_rejected(grid299):
    with pytest.raises(NotInRange):
        nl.solve_positive(grid299, make_params(grid299, 5.0))
    with pytest.raises(NotInRange):
        nl.solve_positive(grid299, make_params(grid299, 120.0))


def test_tiny_init_converges_to_zero():
    g = make_grid(99)
    p = make_params(g, 5.0)                 # subcritical: only trivial state
    init = 1e-3 * nl.dirichlet_spectrum(g, 1).eigenfields[0]
    with pytest.raises(ConvergedToZero):
        nl.solve_positive(g, p, init=init, check_range=False)


def test_nonexistence_probe(grid299, params120):
    report = nonexistence_probe(grid299, params120,
                                rng=np.random.default_rng(0))
    assert len(report.attempts) == 5
    assert all(a in ("ConvergedToZero", "NoConvergence", "NotPositive")
               for a in report.attempts)
    # the trajectory grows inside Omega0 instead of settling
    n = len(report.l2_omega0_series)
    tail = report.l2_omega0_series[n // 10:]
    assert np.all(np.diff(tail) > 0)
    assert report.growth_stat > 100.0


def test_nonexistence_probe_guard(grid299, params60):
    with pytest.raises(NotInRange):
        nonexistence_probe(grid299, params60)


def test_path_spec_validation():
    with pytest.raises(ValueError):
        nl.PathSpec(t1=0.0)
    with pytest.raises(ValueError):
        nl.PathSpec(samples_per_segment=4)


def test_mp_path(grid299, params60, phi60, mp_path60):
    assert len(mp_path60) == 100
    # endpoints are the projections of +/- phi, i.e. +/- phi themselves
    assert np.max(np.abs(mp_path60[0] - phi60.field)) < 1e-6
    assert np.max(np.abs(mp_path60[-1] + phi60.field)) < 1e-6
    energies = []
    for u in mp_path60:
        rep = nl.classify(grid299, params60, u)
        assert rep.nehari_side == "N"
        energies.append(rep.I)
    assert max(energies) < 0.0             # the whole path stays below zero
    assert max(energies) > phi60.energy    # but must climb over a barrier


def test_mountain_pass_solution(grid299, params60, phi60, ustar60):
    assert ustar60.residual_norm <= 1e-7
    assert ustar60.sign_domains >= 2
    assert phi60.energy < ustar60.energy < 0.0
    assert ustar60.morse_index >= 1
    rep = ustar60.nehari_report
    assert rep.nehari_side == "N" and rep.s_class == "S+"


def test_mountain_pass_needs_projectable_path():
    g = make_grid(99)
    p = make_params(g, 20.0)               # lam < lam2: rotation leg has A > 0
    phi = nl.solve_positive(g, p)
    with pytest.raises(PathNotProjectable):
        nl.build_mp_path(g, p, phi.field)


def test_sign_domains():
    g = make_grid(99)
    x = g.coords[:, 0]
    assert nl.sign_domains(g, np.zeros(99)) == 0
    assert nl.sign_domains(g, np.sin(np.pi * x)) == 1
    assert nl.sign_domains(g, np.sin(2 * np.pi * x)) == 2
    assert nl.sign_domains(g, np.sin(3 * np.pi * x)) == 3
