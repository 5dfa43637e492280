"""Command-line front end: experiment orchestration and persistence.

Subcommands: spectrum | stationary | mountain-pass | evolve | probe |
sweep.  Exit code 0 on success, 2 on a regime mismatch, 1 otherwise.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import io
from .config import (ADMISSIBLE, MOUNTAIN_PASS, SUBCRITICAL, SUPERCRITICAL,
                     ConfigError, DEFAULT_CONFIG_TEXT, ExperimentConfig,
                     RunManifest, load_config, parse_config, regime_label)
from .domain import build_grid, build_weight
from .nehari import ProblemParams, fiber_scan
from .parabolic import StepperConfig, basin_scan, evolve, stable_probe
from .spectral import dirichlet_spectrum, subdomain_spectrum
from .stationary import (ConvergedToZero, FoundPositiveEquilibrium,
                         NoConvergence, NotInRange, NotPositive, PathSpec,
                         build_mp_path, mountain_pass, nonexistence_probe,
                         solve_positive)

__all__ = ["main"]


class RegimeMismatch(RuntimeError):
    pass


class _Context:
    """Grid, weight, params and the spectral landmarks for one lambda."""

    def __init__(self, cfg: ExperimentConfig, lam: float):
        self.cfg = cfg
        self.lam = lam
        self.grid = build_grid(cfg.domain)
        self.b = build_weight(self.grid, cfg.weight)
        self.params = ProblemParams(lam=lam, nu=cfg.nu, b=self.b)
        self.spec_omega = dirichlet_spectrum(self.grid, 2)
        self.spec_omega0 = subdomain_spectrum(self.grid, 2)
        self.lam1, self.lam2 = self.spec_omega.eigenvalues[:2]
        self.lam1_sub, self.lam2_sub = self.spec_omega0.eigenvalues[:2]
        self.regime = regime_label(lam, self.lam1, self.lam2, self.lam1_sub)
        self.rng = np.random.default_rng(cfg.seed)

    def manifest(self, artifacts) -> RunManifest:
        return RunManifest(config_hash=self.cfg.config_hash(), lam=self.lam,
                           lam1_omega=float(self.lam1),
                           lam2_omega=float(self.lam2),
                           lam1_omega0=float(self.lam1_sub),
                           lam2_omega0=float(self.lam2_sub),
                           regime=self.regime, artifacts=tuple(artifacts))


def _out_dir(cfg: ExperimentConfig, command: str, lam: float,
             override: str | None) -> Path:
    base = Path(override) if override else Path(cfg.out_dir)
    out = base / f"{command}-lam{io.fmt(lam)}"
    out.mkdir(parents=True, exist_ok=True)
    return out


def _append_run_index(out: Path, command: str, files) -> None:
    index = out.parent / "run_index.txt"
    with index.open("a") as fh:
        fh.write(command + "\t" + out.name + "\t" + ",".join(files) + "\n")


def _write_manifest(ctx: _Context, out: Path, files) -> None:
    io.write_json(out / "manifest.json", ctx.manifest(files).as_dict())


def _plot_script(out: Path, name: str, csv: str, xcol: str, ycol: str,
                 title: str) -> str:
    script = out / name
    script.write_text(f"""\
import csv
import matplotlib.pyplot as plt

xs, ys = [], []
with open({csv!r}) as fh:
    for row in csv.DictReader(fh):
        xs.append(float(row[{xcol!r}]))
        ys.append(float(row[{ycol!r}]))
plt.plot(xs, ys)
plt.xlabel({xcol!r})
plt.ylabel({ycol!r})
plt.title({title!r})
plt.savefig({csv!r}.replace('.csv', '.png'), dpi=150)
""")
    return name


def read_field_csv(path) -> np.ndarray:
    rows = Path(path).read_text().strip().splitlines()
    return np.array([float(line.rsplit(",", 1)[1]) for line in rows[1:]])


def cmd_spectrum(ctx: _Context, out: Path) -> list:
    files = []
    for tag, spec in (("omega", ctx.spec_omega), ("omega0", ctx.spec_omega0)):
        name = f"spectrum_{tag}.csv"
        io.spectrum_to_csv(out / name, spec)
        files.append(name)
        for i, psi in enumerate(spec.eigenfields, start=1):
            fname = f"eigenfield_{tag}_{i}.csv"
            io.field_to_csv(out / fname, ctx.grid, psi)
            files.append(fname)
    return files


def _solve_phi(ctx: _Context):
    return solve_positive(ctx.grid, ctx.params, tol=ctx.cfg.solver_tol)


def cmd_stationary(ctx: _Context, out: Path) -> list:
    result = _solve_phi(ctx)
    io.field_to_csv(out / "phi.csv", ctx.grid, result.field)
    io.write_json(out / "summary.json", _equilibrium_summary(ctx, result))
    t_grid = np.linspace(0.1, 2.0, 39)
    samples = fiber_scan(ctx.grid, ctx.params, result.field, t_grid)
    lines = ["t,value,slope"]
    for s in samples:
        lines.append(f"{io.fmt(s.t)},{io.fmt(s.value)},{io.fmt(s.slope)}")
    (out / "fiber.csv").write_text("\n".join(lines) + "\n")
    plot = _plot_script(out, "plot_fiber.py", "fiber.csv", "t", "value",
                        "fibering map along phi")
    return ["phi.csv", "summary.json", "fiber.csv", plot]


def _equilibrium_summary(ctx: _Context, result) -> dict:
    return {
        "lambda": ctx.lam,
        "nu": ctx.cfg.nu,
        "grid": {"dimension": ctx.grid.dim, "shape": list(ctx.grid.shape)},
        "residual": result.residual_norm,
        "energy": result.energy,
        "morse_index": result.morse_index,
        "sign_domains": result.sign_domains,
        "nehari_side": result.nehari_report.nehari_side,
        "s_class": result.nehari_report.s_class,
        "iterations": result.iterations,
    }


def cmd_mountain_pass(ctx: _Context, out: Path) -> list:
    if ctx.regime != MOUNTAIN_PASS:
        raise RegimeMismatch(
            f"mountain-pass needs lambda2(Omega) < lambda < lambda1(Omega0) "
            f"({io.fmt(ctx.lam2)} < lambda < {io.fmt(ctx.lam1_sub)}); "
            f"regime is {ctx.regime}")
    phi = _solve_phi(ctx)
    path = build_mp_path(ctx.grid, ctx.params, phi.field, PathSpec())
    from .nehari import energy as energy_fn
    lines = ["index,energy"]
    for i, p in enumerate(path):
        lines.append(f"{i},{io.fmt(energy_fn(ctx.grid, ctx.params, p))}")
    (out / "path_energies.csv").write_text("\n".join(lines) + "\n")
    ustar = mountain_pass(ctx.grid, ctx.params, path)
    io.field_to_csv(out / "ustar.csv", ctx.grid, ustar.field)
    io.field_to_csv(out / "phi.csv", ctx.grid, phi.field)
    summary = _equilibrium_summary(ctx, ustar)
    summary["energy_phi"] = phi.energy
    io.write_json(out / "summary.json", summary)
    plot = _plot_script(out, "plot_path.py", "path_energies.csv", "index",
                        "energy", "energy along the projected path")
    return ["phi.csv", "ustar.csv", "path_energies.csv", "summary.json", plot]


def _initial_field(ctx: _Context, preset: str) -> np.ndarray:
    phi1 = ctx.spec_omega.eigenfields[0]
    if preset == "positive-eigen":
        return 0.1 * phi1
    if preset == "negative-eigen":
        return -0.1 * phi1
    if preset == "random":
        return ctx.rng.standard_normal(ctx.grid.n_nodes)
    raise ConfigError(f"unknown initial-data preset {preset!r}")


def cmd_evolve(ctx: _Context, out: Path, preset: str) -> list:
    equilibria = [("zero", np.zeros(ctx.grid.n_nodes))]
    if ctx.regime in (ADMISSIBLE, MOUNTAIN_PASS):
        phi = _solve_phi(ctx)
        equilibria += [("phi", phi.field), ("-phi", -phi.field)]
    u0 = _initial_field(ctx, preset)
    record = evolve(ctx.grid, ctx.params, u0, ctx.cfg.stepper, equilibria)
    io.trajectory_to_csv(out / "trajectory.csv", record)
    io.field_to_csv(out / "final_field.csv", ctx.grid, record.final_field)
    io.write_json(out / "summary.json", {
        "lambda": ctx.lam,
        "preset": preset,
        "classification": record.classification,
        "equilibrium": record.equilibrium,
        "final_energy": float(record.energies[-1]),
        "samples": len(record.times),
    })
    plot = _plot_script(out, "plot_energy.py", "trajectory.csv", "t",
                        "energy", "energy along the trajectory")
    return ["trajectory.csv", "final_field.csv", "summary.json", plot]


def cmd_probe(ctx: _Context, out: Path, ustar_path: str | None) -> list:
    if ustar_path is None:
        default = out.parent / f"mountain-pass-lam{io.fmt(ctx.lam)}" / "ustar.csv"
        if not default.exists():
            raise FileNotFoundError(
                "no stored mountain-pass solution; run mountain-pass first "
                "or pass --ustar")
        ustar_path = default
    ustar = read_field_csv(ustar_path)
    lines = ["eps,index,mu,a,prediction,measured_J,defect,dwell_time"]
    cfg = replace(ctx.cfg.stepper, horizon=min(ctx.cfg.stepper.horizon, 5.0))
    for eps in (1e-2, 5e-3, 2.5e-3):
        r = _first_stable_probe(ctx, ustar, eps, cfg)
        lines.append(",".join([io.fmt(eps), str(r.index), io.fmt(r.mu),
                               io.fmt(r.a), io.fmt(r.prediction),
                               io.fmt(r.measured_J), io.fmt(r.defect),
                               io.fmt(r.dwell_time)]))
    (out / "probe.csv").write_text("\n".join(lines) + "\n")
    return ["probe.csv"]


def _first_stable_probe(ctx: _Context, ustar, eps, cfg):
    """Probe along the first stable direction with sizeable overlap."""
    from .spectral import linearized_spectrum, morse_count
    spec = linearized_spectrum(ctx.grid, ctx.params, ustar, k=8)
    q = morse_count(spec)
    for i in range(q + 1, spec.k + 1):
        a = ctx.grid.cell * float(ustar @ spec.eigenfields[i - 1])
        if spec.eigenvalues[i - 1] > 0 and abs(a) > 1e-8:
            return stable_probe(ctx.grid, ctx.params, ustar, i, eps, cfg=cfg)
    raise RuntimeError("no stable direction with a sizeable overlap found")


def cmd_sweep(cfg: ExperimentConfig, out_override: str | None) -> int:
    """Run the per-lambda pipeline for every value in the sweep list."""
    rows = ["lambda,regime,outcome,energy"]
    base = Path(out_override) if out_override else Path(cfg.out_dir)
    for lam in cfg.lambdas:
        ctx = _Context(cfg, lam)
        out = _out_dir(cfg, "sweep", lam, out_override)
        files = cmd_spectrum(ctx, out)
        if ctx.regime == SUBCRITICAL:
            try:
                solve_positive(ctx.grid, ctx.params, check_range=False,
                               tol=cfg.solver_tol)
                outcome, e = "unexpected-equilibrium", ""
            except (ConvergedToZero, NoConvergence, NotPositive):
                outcome, e = "trivial-only", ""
        elif ctx.regime == SUPERCRITICAL:
            nonexistence_probe(ctx.grid, ctx.params)
            outcome, e = "no-positive-equilibrium", ""
        else:
            phi = _solve_phi(ctx)
            io.field_to_csv(out / "phi.csv", ctx.grid, phi.field)
            files.append("phi.csv")
            outcome, e = "positive-equilibrium", io.fmt(phi.energy)
            if ctx.regime == MOUNTAIN_PASS:
                path = build_mp_path(ctx.grid, ctx.params, phi.field)
                ustar = mountain_pass(ctx.grid, ctx.params, path)
                io.field_to_csv(out / "ustar.csv", ctx.grid, ustar.field)
                files.append("ustar.csv")
                outcome = "positive-and-sign-changing"
        _write_manifest(ctx, out, files + ["manifest.json"])
        _append_run_index(out, "sweep", files + ["manifest.json"])
        rows.append(f"{io.fmt(lam)},{ctx.regime},{outcome},{e}")
    base.mkdir(parents=True, exist_ok=True)
    (base / "sweep_summary.csv").write_text("\n".join(rows) + "\n")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="neharilab",
        description="Nehari-manifold lab for the degenerate logistic equation")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("spectrum", "stationary", "mountain-pass", "evolve",
                 "probe", "sweep"):
        p = sub.add_parser(name)
        p.add_argument("--config", type=str, default=None)
        p.add_argument("--out", type=str, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--lambda", dest="lam", type=float, default=None)
        if name == "evolve":
            p.add_argument("--u0", type=str, default="positive-eigen")
        if name == "probe":
            p.add_argument("--ustar", type=str, default=None)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config \
            else parse_config(DEFAULT_CONFIG_TEXT)
        if args.seed is not None:
            cfg = replace(cfg, seed=args.seed)
        if args.lam is not None:
            cfg = replace(cfg, lambdas=(args.lam,))

        if args.command == "sweep":
            return cmd_sweep(cfg, args.out)

        ctx = _Context(cfg, cfg.lam)
        out = _out_dir(cfg, args.command, ctx.lam, args.out)
        if args.command == "spectrum":
            files = cmd_spectrum(ctx, out)
        elif args.command == "stationary":
            files = cmd_stationary(ctx, out)
        elif args.command == "mountain-pass":
            files = cmd_mountain_pass(ctx, out)
        elif args.command == "evolve":
            files = cmd_evolve(ctx, out, args.u0)
        elif args.command == "probe":
            files = cmd_probe(ctx, out, args.ustar)
        _write_manifest(ctx, out, files + ["manifest.json"])
        _append_run_index(out, args.command, files + ["manifest.json"])
        return 0
    except (RegimeMismatch, NotInRange) as exc:
        print(f"regime mismatch: {exc}", file=sys.stderr)
        return 2
    except FoundPositiveEquilibrium as exc:
        print(f"COUNTEREXAMPLE: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:   # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
