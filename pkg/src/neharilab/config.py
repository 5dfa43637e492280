"""Experiment configuration: flat key = value text with dotted section
prefixes, plus the run manifest with the computed spectral regime.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .domain import DomainSpec, WeightSpec
from .parabolic import StepperConfig

__all__ = [
    "ExperimentConfig",
    "RunManifest",
    "ConfigError",
    "parse_config",
    "load_config",
    "regime_label",
    "DEFAULT_CONFIG_TEXT",
]

# regime labels, from the spectral window lambda falls in
SUBCRITICAL = "subcritical"
ADMISSIBLE = "admissible"
MOUNTAIN_PASS = "mountain-pass-window"
SUPERCRITICAL = "supercritical"


class ConfigError(ValueError):
    pass


_KNOWN_KEYS = {
    "domain.dimension", "domain.extent", "domain.resolution", "domain.omega0",
    "weight.profile", "weight.amplitude", "weight.delta",
    "problem.nu", "problem.lambda",
    "stepper.dt", "stepper.horizon", "stepper.stride", "stepper.growth_cutoff",
    "solver.tol",
    "run.seed", "run.out",
}

DEFAULT_CONFIG_TEXT = """\
domain.dimension = 1
domain.extent = 1.0
domain.resolution = 299
domain.omega0 = 0.4 0.7
weight.profile = plateau
weight.amplitude = 1.0
weight.delta = 0.0
problem.nu = 3.0
problem.lambda = 20.0
stepper.dt = auto
stepper.horizon = 20.0
stepper.stride = 10
stepper.growth_cutoff = 1000.0
solver.tol = 1e-9
run.seed = 0
run.out = runs
"""


@dataclass(frozen=True)
class ExperimentConfig:
    domain: DomainSpec
    weight: WeightSpec
    nu: float
    lambdas: tuple          # one or more lambda values
    stepper: StepperConfig
    solver_tol: float
    out_dir: str
    seed: int
    source_text: str = field(repr=False, default="")

    @property
    def lam(self) -> float:
        if len(self.lambdas) != 1:
            raise ConfigError("config holds a lambda sweep; pick one value")
        return self.lambdas[0]

    def config_hash(self) -> str:
        return hashlib.sha256(self.source_text.encode()).hexdigest()[:16]


def _floats(text):
    return tuple(float(v) for v in text.split())


def parse_config(text: str) -> ExperimentConfig:
    """Parse key = value lines; '#' starts a comment; unknown keys are
    rejected."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        values[key] = val

    merged = {}
    for line in DEFAULT_CONFIG_TEXT.splitlines():
        key, _, val = line.partition("=")
        merged[key.strip()] = val.strip()
    merged.update(values)

    dim = int(merged["domain.dimension"])
    extent = _floats(merged["domain.extent"])
    resolution = tuple(int(v) for v in merged["domain.resolution"].split())
    box_vals = _floats(merged["domain.omega0"])
    if len(box_vals) != 2 * dim:
        raise ConfigError("domain.omega0 needs lo hi per axis")
    omega0 = tuple((box_vals[2 * i], box_vals[2 * i + 1]) for i in range(dim))
    if len(extent) == 1 and dim == 2:
        extent = extent * 2
    if len(resolution) == 1 and dim == 2:
        resolution = resolution * 2
    try:
        domain = DomainSpec(dimension=dim, extent=extent,
                            resolution=resolution, omega0=omega0)
        weight = WeightSpec(profile=merged["weight.profile"],
                            amplitude=float(merged["weight.amplitude"]),
                            delta=float(merged["weight.delta"]))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    lambdas = _floats(merged["problem.lambda"])
    if not lambdas:
        raise ConfigError("problem.lambda needs at least one value")

    dt_text = merged["stepper.dt"]
    dt = None if dt_text == "auto" else float(dt_text)
    stepper = StepperConfig(dt=dt, horizon=float(merged["stepper.horizon"]),
                            stride=int(merged["stepper.stride"]),
                            growth_cutoff=float(merged["stepper.growth_cutoff"]))

    canonical = "\n".join(f"{k} = {merged[k]}" for k in sorted(merged))
    return ExperimentConfig(domain=domain, weight=weight,
                            nu=float(merged["problem.nu"]), lambdas=lambdas,
                            stepper=stepper,
                            solver_tol=float(merged["solver.tol"]),
                            out_dir=merged["run.out"],
                            seed=int(merged["run.seed"]),
                            source_text=canonical)


def load_config(path) -> ExperimentConfig:
    return parse_config(Path(path).read_text())


def regime_label(lam: float, lam1: float, lam2: float, lam1_sub: float) -> str:
    """Window of lambda relative to the discrete eigenvalues; the
    mountain-pass window refines the admissible one."""
    if lam <= lam1:
        return SUBCRITICAL
    if lam >= lam1_sub:
        return SUPERCRITICAL
    if lam > lam2:
        return MOUNTAIN_PASS
    return ADMISSIBLE


@dataclass(frozen=True)
class RunManifest:
    config_hash: str
    lam: float
    lam1_omega: float
    lam2_omega: float
    lam1_omega0: float
    lam2_omega0: float
    regime: str
    artifacts: tuple

    def __post_init__(self):
        expected = regime_label(self.lam, self.lam1_omega, self.lam2_omega,
                                self.lam1_omega0)
        if expected != self.regime:
            raise ValueError(f"regime {self.regime!r} inconsistent with "
                             f"eigenvalues (expected {expected!r})")

    def as_dict(self) -> dict:
        return {
            "config_hash": self.config_hash,
            "lambda": self.lam,
            "lambda1_omega": self.lam1_omega,
            "lambda2_omega": self.lam2_omega,
            "lambda1_omega0": self.lam1_omega0,
            "lambda2_omega0": self.lam2_omega0,
            "regime": self.regime,
            "artifacts": list(self.artifacts),
        }
