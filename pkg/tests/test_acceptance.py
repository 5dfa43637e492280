"""Acceptance suite: thirteen numbered criteria, one pass/fail line each.

All criteria run on the default 1D geometry Omega = (0, 1) with
Omega0 = (0.4, 0.7), plateau weight b0 = 1, nu = 3; dynamics batteries
use a reduced resolution to stay inside the time budget.
"""

import filecmp

import numpy as np
import pytest

import neharilab as nl
from neharilab.cli import main as cli_main
from neharilab.nehari import quad_scalars
from neharilab.stationary import (ConvergedToZero, NoConvergence, NotPositive,
                                  default_positive_init, nonexistence_probe)
from conftest import make_grid, make_params, record_acceptance


def closed_form_1d(h, k):
    j = np.arange(1, k + 1)
    return (4.0 / h ** 2) * np.sin(j * np.pi * h / 2.0) ** 2


# ----------------------------------------------------------------- 1


def test_criterion_01_spectral_oracle():
    max_rel = 0.0
    errors = {}
    for n in (49, 99, 199):
        g = make_grid(n)
        spec = nl.dirichlet_spectrum(g, 2)
        exact = closed_form_1d(g.h[0], 2)
        max_rel = max(max_rel,
                      float(np.max(np.abs(spec.eigenvalues - exact) / exact)))
        errors[n] = np.abs(spec.eigenvalues - np.array([np.pi ** 2,
                                                        4 * np.pi ** 2]))
    orders = [float(np.log2(errors[49][k] / errors[99][k])) for k in range(2)]
    orders += [float(np.log2(errors[99][k] / errors[199][k]))
               for k in range(2)]
    ok = max_rel <= 1e-10 and all(1.8 <= o <= 2.2 for o in orders)
    assert record_acceptance(
        1, "spectral-oracle", ok,
        f"max rel err {max_rel:.2e}, orders {[round(o, 3) for o in orders]}")


# ----------------------------------------------------------------- 2


def test_criterion_02_domain_monotonicity():
    cases = []
    for box in (((0.4, 0.7),), ((0.1, 0.9),), ((0.45, 0.55),)):
        g = nl.build_grid(nl.DomainSpec(1, (1.0,), (199,), box))
        cases.append((nl.dirichlet_spectrum(g, 1).eigenvalues[0],
                      nl.subdomain_spectrum(g, 1).eigenvalues[0]))
    g2 = nl.build_grid(nl.DomainSpec(2, (1.0, 1.0), (31, 31),
                                     ((0.4, 0.7), (0.3, 0.8))))
    cases.append((nl.dirichlet_spectrum(g2, 1).eigenvalues[0],
                  nl.subdomain_spectrum(g2, 1).eigenvalues[0]))
    ok = all(lam1 < lam1_sub for lam1, lam1_sub in cases)
    assert record_acceptance(2, "domain-monotonicity", ok,
                             f"{len(cases)} subdomain geometries")


# --------------------------------------------------------------- 3, 4


@pytest.fixture(scope="module")
def random_samples(grid299, params60):
    """100 random fields dominated by the modes below lambda = 60, i.e.
    projectable sign pattern A < 0, B < 0 (checked sample by sample)."""
    spec = nl.dirichlet_spectrum(grid299, 6)
    rng = np.random.default_rng(42)
    low = spec.eigenvalues < params60.lam
    fields = []
    while len(fields) < 100:
        c = np.where(low, rng.uniform(1.0, 2.0, 6) * rng.choice([-1, 1], 6),
                     0.05 * rng.standard_normal(6))
        u = c @ spec.eigenfields
        A, B = quad_scalars(grid299, params60, u)
        if A < 0 and B < 0:
            fields.append(u)
    return fields


def test_criterion_03_nehari_identity(grid299, params60, random_samples):
    worst = 0.0
    for u in random_samples:
        _, on = nl.project_to_nehari(grid299, params60, u)
        I, fa, fb = nl.nehari_energy_identity(grid299, params60, on)
        scale = max(1.0, abs(I))
        worst = max(worst, abs(I - fa) / scale, abs(I - fb) / scale)
    ok = worst <= 1e-9
    assert record_acceptance(3, "nehari-identity", ok,
                             f"100 samples, worst rel defect {worst:.2e}")


def test_criterion_04_projection_formula(grid299, params60, random_samples):
    worst_J = 0.0
    agree = True
    for u in random_samples:
        # normalize so the absolute tolerance on J is meaningful
        u = u / np.sqrt(nl.h1_seminorm_sq(grid299, u))
        A, B = quad_scalars(grid299, params60, u)
        t, on = nl.project_to_nehari(grid299, params60, u)
        agree &= t == pytest.approx((A / B) ** 0.5, rel=1e-12)
        worst_J = max(worst_J, abs(nl.nehari_J(grid299, params60, on)))
    # NotProjectable exactly when the sign pattern (A < 0 and B < 0) fails
    spec = nl.dirichlet_spectrum(grid299, 6)
    rejected = True
    for u in (spec.eigenfields[5],                        # A > 0
              np.where(grid299.omega0_mask, 1.0, 0.0)):   # B = 0
        try:
            nl.project_to_nehari(grid299, params60, u)
            rejected = False
        except nl.NotProjectable:
            pass
    ok = worst_J <= 1e-10 and agree and rejected
    assert record_acceptance(4, "projection-formula", ok,
                             f"worst |J(t* u)| = {worst_J:.2e}")


# ----------------------------------------------------------------- 5


def test_criterion_05_regime_dichotomy(grid299, params120, phi20, phi60):
    exists = True
    for result in (phi20, phi60):
        exists &= (np.all(result.field > 0)
                   and result.residual_norm <= 1e-9
                   and result.energy < 0
                   and result.nehari_report.s_class == "S+")
    try:
        report = nonexistence_probe(grid299, params120, m=5,
                                    rng=np.random.default_rng(0))
        none_above = len(report.attempts) == 5 and report.growth_stat > 100.0
        detail = f"5 failed solves above threshold, attempts {set(report.attempts)}"
    except Exception as exc:   # a positive equilibrium above the threshold
        none_above = False
        detail = f"unexpected {type(exc).__name__}"
    ok = exists and none_above
    assert record_acceptance(5, "regime-dichotomy", ok, detail)


# ----------------------------------------------------------------- 6


def test_criterion_06_uniqueness_symmetry(grid299, params20, phi20):
    rng = np.random.default_rng(11)
    x = grid299.coords[:, 0]
    psi1 = nl.dirichlet_spectrum(grid299, 1).eigenfields[0]
    unique = True
    for trial in range(20):
        # smooth positive data with amplitudes across four decades and a
        # random positive modulation; solve_positive renormalizes by
        # projecting onto the manifold
        amp = 10.0 ** rng.uniform(-2.0, 2.0)
        bump = 1.0 + 0.5 * np.sin(rng.integers(1, 6) * np.pi * x) \
            * rng.uniform(-1.0, 1.0)
        init = amp * psi1 * bump
        assert np.all(init > 0)
        result = nl.solve_positive(grid299, params20, init=init)
        unique &= nl.l2_norm(grid299, result.field - phi20.field) <= 1e-6
    init = default_positive_init(grid299, params20)
    pos = nl.solve_positive(grid299, params20, init=init)
    neg = nl.solve_positive(grid299, params20, init=-init)
    mirror = np.array_equal(neg.field, -pos.field)
    ok = unique and mirror
    assert record_acceptance(
        6, "uniqueness-symmetry", ok,
        f"20 initializations, negated data mirrors exactly: {mirror}")


# ----------------------------------------------------------------- 7


def test_criterion_07_mountain_pass(grid299, params60, phi60, ustar60):
    ok = (ustar60.sign_domains >= 2
          and phi60.energy < ustar60.energy < 0.0
          and ustar60.residual_norm <= 1e-7
          and ustar60.morse_index >= 1)
    assert record_acceptance(
        7, "mountain-pass", ok,
        f"I(phi) = {phi60.energy:.4g} < I(u*) = {ustar60.energy:.4g} < 0, "
        f"sign domains {ustar60.sign_domains}, Morse {ustar60.morse_index}")


# ------------------------------------------------------------ 8, 9, 10


@pytest.fixture(scope="module")
def battery(grid149):
    """Trajectories from 20 random fields (H1 seminorm up to 10) at
    lambda = 20 and 60, run to a doubled horizon."""
    rng = np.random.default_rng(5)
    cfg = nl.StepperConfig(horizon=6.0, stride=10)
    runs = []
    for lam in (20.0, 60.0):
        p = make_params(grid149, lam)
        for _ in range(10):
            u0 = rng.standard_normal(grid149.n_nodes)
            u0 *= rng.uniform(0.1, 10.0) / np.sqrt(nl.h1_seminorm_sq(grid149, u0))
            runs.append((p, nl.evolve(grid149, p, u0, cfg, equilibria=[])))
    return runs


def test_criterion_08_lyapunov(grid299, params20, battery):
    monotone = True
    for _, rec in battery:
        report = nl.lyapunov_check(rec)
        monotone &= report.monotone
    # dissipation-identity defect is second order in dt: halving dt must
    # shrink it about fourfold (smooth data isolate the quadrature term)
    spec = nl.dirichlet_spectrum(grid299, 3)
    u0 = spec.eigenfields[0] + 0.5 * spec.eigenfields[1] \
        + 0.25 * spec.eigenfields[2]
    defects = []
    for dt in (2e-3, 1e-3):
        cfg = nl.StepperConfig(dt=dt, horizon=0.5, stride=10)
        rec = nl.evolve(grid299, params20, u0, cfg, equilibria=[])
        defects.append(nl.lyapunov_check(rec, dt=dt).max_identity_defect)
    ratio = defects[0] / defects[1]
    ok = monotone and 3.0 <= ratio <= 5.0
    assert record_acceptance(
        8, "lyapunov-dissipation", ok,
        f"all {len(battery)} trajectories monotone, "
        f"defect ratio under dt halving {ratio:.3f}")


def test_criterion_09_global_boundedness(battery):
    no_growth = all(rec.classification != "growing" for _, rec in battery)
    stable = True
    for _, rec in battery:
        half = rec.times <= rec.times[-1] / 2.0
        sup_half = float(rec.h1_norms[half].max())
        sup_full = float(rec.h1_norms.max())
        stable &= sup_full <= sup_half * 1.05 + 1e-12
    ok = no_growth and stable
    assert record_acceptance(
        9, "global-boundedness", ok,
        f"{len(battery)} trajectories bounded, sup H1 stable under "
        "horizon doubling")


def test_criterion_10_positive_cone_attraction(grid149):
    p = make_params(grid149, 20.0)
    phi = nl.solve_positive(grid149, p)
    equilibria = [("phi", phi.field), ("-phi", -phi.field)]
    cfg = nl.StepperConfig(horizon=30.0, stride=20)
    rng = np.random.default_rng(8)
    psi1 = nl.dirichlet_spectrum(grid149, 1).eigenfields[0]
    seeds = [0.1 * psi1, 2.0 * psi1]
    seeds += [rng.uniform(0.05, 1.0, grid149.n_nodes) for _ in range(3)]
    attracted = True
    for u0 in seeds:
        pos = nl.evolve(grid149, p, u0, cfg, equilibria)
        neg = nl.evolve(grid149, p, -u0, cfg, equilibria)
        attracted &= pos.equilibrium == "phi" and neg.equilibrium == "-phi"
    assert record_acceptance(
        10, "positive-cone-attraction", attracted,
        f"{len(seeds)} positive and {len(seeds)} negative seeds")


# ----------------------------------------------------------------- 11


def test_criterion_11_stable_manifold_probe(grid299, params60, ustar60):
    eps_list = (1e-2, 5e-3, 2.5e-3)
    results = [nl.stable_probe(grid299, params60, ustar60.field, i=2, eps=e)
               for e in eps_list]
    overlap = all(abs(r.a) > 1e-8 for r in results)
    ratios = [results[j].defect / results[j + 1].defect for j in range(2)]
    ok = overlap and all(3.5 <= r <= 4.5 for r in ratios)
    assert record_acceptance(
        11, "stable-manifold-probe", ok,
        f"defect ratios {[round(r, 3) for r in ratios]}")


# ----------------------------------------------------------------- 12


def test_criterion_12_no_positive_B(grid299, grid149, params60,
                                    random_samples, mp_path60, phi20, phi60,
                                    ustar60, battery):
    produced = [(grid299, params60, u) for u in random_samples]
    produced += [(grid299, params60, u) for u in mp_path60]
    produced += [(grid299, params60, u)
                 for u in (phi20.field, phi60.field, ustar60.field)]
    produced += [(grid149, p, rec.final_field) for p, rec in battery]
    rng = np.random.default_rng(123)
    produced += [(grid299, params60, rng.standard_normal(grid299.n_nodes))
                 for _ in range(100)]
    worst_B = -np.inf
    never_positive = True
    for g, p, u in produced:
        rep = nl.classify(g, p, u)
        worst_B = max(worst_B, rep.B)
        never_positive &= rep.B <= 0 and rep.b_class in ("B-", "B0")
    assert record_acceptance(
        12, "no-positive-B", never_positive,
        f"max B over every produced field {worst_B:.3e}")


# ----------------------------------------------------------------- 13


def test_criterion_13_reproducibility(tmp_path):
    cfg = tmp_path / "fast.cfg"
    cfg.write_text("domain.resolution = 149\nstepper.horizon = 10.0\n"
                   "stepper.stride = 20\n")
    runs = (["spectrum"], ["stationary"], ["evolve", "--u0", "random"])
    for target in ("a", "b"):
        for cmd in runs:
            code = cli_main(cmd + ["--config", str(cfg), "--seed", "3",
                                   "--out", str(tmp_path / target)])
            assert code == 0
    identical = True
    for run in ("spectrum-lam20", "stationary-lam20", "evolve-lam20"):
        cmp = filecmp.dircmp(tmp_path / "a" / run, tmp_path / "b" / run)
        identical &= not cmp.diff_files and not cmp.left_only \
            and not cmp.right_only
    assert record_acceptance(13, "reproducibility", identical,
                             "seeded CLI reruns byte-identical")
