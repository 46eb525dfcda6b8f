"""Scenario configuration files.

A scenario is a TOML file. Every table and key is optional; unknown keys are
rejected so typos fail loudly. See ``docs/config.md`` for the schema.
"""
from __future__ import annotations

import copy
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

try:  # Python >= 3.11
    import tomllib
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

from .dynamics.grid import InitialCondition
from .gauges import HarmonicDrive, PhysicalParams

EXPERIMENTS = ("compare-gauges", "transient", "convergence", "drude-sweep", "algebra-selftest")


class ConfigError(ValueError):
    pass


DEFAULTS = {
    "experiment": "compare-gauges",
    "gauge": "both",
    "solver": "both",
    "seed": None,
    "params": {"m": 1.0, "e": 1.0, "c": 1.0, "alpha": 0.5, "hbar": 1.0, "N": 1},
    "drive": {"E0": 0.1, "omega": 2.0, "phase": 0.0, "representation": "RealCosine"},
    "initial": {"kind": "GaussianPacket", "q0": 0.0, "p0": 0.0, "sq": 25.0, "sp": 25.0,
                "k": 0.0, "c_norm": 1.0},
    "grid": {"nq": 256, "np": 256, "interpolation": "cubic", "steps_per_period": 200,
             "dc_dt": 0.05, "nsigma": 7.0, "bounds": None},
    "characteristics": {"n": 64, "nsigma": 7.0},
    "time": {"horizon": None, "window": None, "burn_in": None},
    "transient": {"p0": 1.0, "window": None, "horizon": None},
    "convergence": {"levels": [64, 128, 256], "steps_per_period": [50, 100, 200],
                    "horizon": 2.0, "sq": 0.5, "sp": 0.5},
    # phi-gauge canonical momentum grows like exp(alpha t); long sweep horizons need the A gauge
    "sweep": {"omegas": [0.0, 0.5, 1.0, 2.0, 4.0], "gauge": "A", "solver": "both"},
    "selftest": {"random_quadratic": 100, "random_times": 10, "random_triples": 25},
    "tolerances": {
        "drude": 1e-6,
        "gauge_gap_characteristics": 1e-6,
        "gauge_gap_grid": 1e-2,
        "decay": 5e-3,
        "convergence_order": 1.8,
        "mass_drift": 1e-6,
        "sweep": 1e-2,
        "algebra": 1e-12,
    },
    "output": {"dir": "eps_out"},
}


@dataclass
class ScenarioConfig:
    experiment: str
    gauge: str
    solver: str
    params: PhysicalParams
    drive: HarmonicDrive
    initial: InitialCondition
    grid: dict
    characteristics: dict
    time: dict
    transient: dict
    convergence: dict
    sweep: dict
    selftest: dict
    tolerances: dict
    output_dir: Path
    seed: Optional[int] = None
    raw: dict = field(default_factory=dict, repr=False)

    def gauges(self):
        return ["A", "phi"] if self.gauge == "both" else [self.gauge]

    def solvers(self):
        return ["characteristics", "grid"] if self.solver == "both" else [self.solver]


def _merge(defaults, given, path=""):
    out = copy.deepcopy(defaults)
    for key, value in given.items():
        where = f"{path}{key}"
        if key not in defaults:
            raise ConfigError(f"unknown key '{where}'")
        if isinstance(defaults[key], dict):
            if not isinstance(value, dict):
                raise ConfigError(f"'{where}' must be a table")
            out[key] = _merge(defaults[key], value, where + ".")
        else:
            out[key] = value
    return out


def _build(section, factory, name):
    try:
        return factory(**section)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"[{name}] {exc}") from exc


def load_config(path=None, text: Optional[str] = None, overrides: Optional[dict] = None) -> ScenarioConfig:
    """Parse and validate a scenario file (or ``text``)."""
    if text is None:
        text = Path(path).read_text() if path is not None else ""
    try:
        given = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        # message carries "(at line L, column C)"
        raise ConfigError(f"{path or '<text>'}: {exc}") from exc
    raw = _merge(DEFAULTS, given)
    if overrides:
        raw = _merge(raw, overrides)
    return from_dict(raw)


def from_dict(raw: dict) -> ScenarioConfig:
    if raw["experiment"] not in EXPERIMENTS:
        raise ConfigError(f"'experiment' must be one of {EXPERIMENTS}, got {raw['experiment']!r}")
    if raw["gauge"] not in ("A", "phi", "both"):
        raise ConfigError(f"'gauge' must be A, phi or both, got {raw['gauge']!r}")
    if raw["solver"] not in ("characteristics", "grid", "both"):
        raise ConfigError(f"'solver' must be characteristics, grid or both, got {raw['solver']!r}")
    params = _build(raw["params"], PhysicalParams, "params")
    drive = _build(raw["drive"], HarmonicDrive, "drive")
    initial = _build(dict(raw["initial"], m=params.m), InitialCondition, "initial")

    grid = raw["grid"]
    for key in ("nq", "np"):
        if int(grid[key]) != grid[key] or grid[key] < 8:
            raise ConfigError(f"'grid.{key}' must be an integer >= 8")
    if grid["interpolation"] not in ("linear", "cubic"):
        raise ConfigError("'grid.interpolation' must be linear or cubic")
    if grid["bounds"] is not None and (len(grid["bounds"]) != 4
                                       or not (grid["bounds"][0] < grid["bounds"][1]
                                               and grid["bounds"][2] < grid["bounds"][3])):
        raise ConfigError("'grid.bounds' must be [q_min, q_max, p_min, p_max] with ordered pairs")
    for key in ("steps_per_period", "dc_dt"):
        if not grid[key] > 0:
            raise ConfigError(f"'grid.{key}' must be positive")
    if raw["sweep"]["gauge"] not in ("A", "phi", "both"):
        raise ConfigError("'sweep.gauge' must be A, phi or both")
    if raw["sweep"]["solver"] not in ("characteristics", "grid", "both"):
        raise ConfigError("'sweep.solver' must be characteristics, grid or both")
    conv = raw["convergence"]
    if len(conv["levels"]) != len(conv["steps_per_period"]) or len(conv["levels"]) < 3:
        raise ConfigError("'convergence.levels' and 'convergence.steps_per_period' need >= 3 matching entries")

    exp = raw["experiment"]
    if exp in ("compare-gauges", "drude-sweep"):
        if drive.E0 == 0:
            raise ConfigError("'drive.E0' = 0 cannot define a conductivity")
        omegas = raw["sweep"]["omegas"] if exp == "drude-sweep" else [drive.omega]
        for w in omegas:
            if params.alpha == 0 and w == 0:
                raise ConfigError("alpha = 0 with omega = 0 has an unbounded DC response")
            if params.alpha == 0 and raw["time"]["burn_in"] is None:
                raise ConfigError("alpha = 0 needs 'time.burn_in' for the fit window")
    if exp == "transient" and not params.alpha > 0:
        raise ConfigError("the transient experiment needs alpha > 0")
    if raw["seed"] is not None and int(raw["seed"]) != raw["seed"]:
        raise ConfigError("'seed' must be an integer")
    for key, value in raw["tolerances"].items():
        if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
            raise ConfigError(f"'tolerances.{key}' must be a positive number")

    return ScenarioConfig(
        experiment=exp, gauge=raw["gauge"], solver=raw["solver"], params=params, drive=drive,
        initial=initial, grid=grid, characteristics=raw["characteristics"], time=raw["time"],
        transient=raw["transient"], convergence=conv, sweep=raw["sweep"],
        selftest=raw["selftest"], tolerances=raw["tolerances"],
        output_dir=Path(raw["output"]["dir"]), seed=raw["seed"], raw=raw,
    )
