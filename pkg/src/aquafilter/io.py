"""Config ingestion and byte-stable CSV serialization of results.

Config files are TOML with flat sections; every key is validated and
unknown keys are rejected.  Keys left out fall back to the default
parameter table and the loader reports which defaults were applied.
"""

from __future__ import annotations

import hashlib
try:
    import tomllib
except ModuleNotFoundError:           # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .discretize import GridSpec
from .experiments import Classification, RunRecord, SweepResult
from .model import (DEFAULT_INITIAL, DimensionalParams, ModelParams, State,
                    default_initial, derive_dimensionless)
from .stepping import TimeSpec

__all__ = [
    "ConfigError",
    "InitialData",
    "RunConfig",
    "load_config",
    "write_config_echo",
    "emit_run",
    "emit_sweep",
    "DEFAULT_INITIAL",
]

class ConfigError(ValueError):
    """Malformed or invalid configuration."""


@dataclass(frozen=True)
class InitialData:
    """Initial data source: the default seed profile, uniform values, or a
    per-node profile file (exactly one)."""

    uniform: tuple | None = None          # (v1, v2, sigma1, sigma2)
    profile_file: str | None = None
    default_seed: bool = False

    def __post_init__(self):
        modes = ((self.uniform is not None) + (self.profile_file is not None)
                 + self.default_seed)
        if modes != 1:
            raise ConfigError(
                "exactly one of default seed, uniform values, or "
                "profile_file must be set")

    def make_state(self, grid: GridSpec) -> State:
        if self.default_seed:
            return default_initial(grid.n)
        if self.uniform is not None:
            v1, v2, s1, s2 = self.uniform
            return State.uniform(grid.n, v1, v2, s1, s2)
        data = np.loadtxt(self.profile_file, delimiter=",", skiprows=1,
                          ndmin=2)
        if data.shape != (grid.n + 1, 4):
            raise ConfigError(
                f"profile file {self.profile_file} has shape {data.shape}, "
                f"expected ({grid.n + 1}, 4)")
        return State(data[:, 0], data[:, 1],
                     float(data[0, 2]), float(data[0, 3]))


@dataclass
class RunConfig:
    model: ModelParams
    dimensional: DimensionalParams | None
    grid: GridSpec
    time: TimeSpec
    initial: InitialData
    experiment: str = "run"               # run | sweep | verify
    sweep_c_rho: tuple = ()
    sweep_f: tuple = ()
    threshold: float = 1e-3
    verify_suites: tuple = ("all",)
    seed: int = 0
    applied_defaults: tuple = ()

    def initial_state(self) -> State:
        return self.initial.make_state(self.grid)


_MODEL_KEYS = {f.name for f in fields(ModelParams)}
_DIMENSIONAL_KEYS = {f.name for f in fields(DimensionalParams)}
_GRID_KEYS = {"n"}
_TIME_KEYS = {"dt", "t_end", "record_every"}
_INITIAL_KEYS = {"v1", "v2", "sigma1", "sigma2", "profile_file"}
_EXPERIMENT_KEYS = {"mode"}
_SWEEP_KEYS = {"c_rho", "f", "threshold"}
_VERIFY_KEYS = {"suites", "seed"}
_SECTIONS = {
    "model": _MODEL_KEYS,
    "dimensional": _DIMENSIONAL_KEYS,
    "grid": _GRID_KEYS,
    "time": _TIME_KEYS,
    "initial": _INITIAL_KEYS,
    "experiment": _EXPERIMENT_KEYS,
    "sweep": _SWEEP_KEYS,
    "verify": _VERIFY_KEYS,
}


def _check_keys(section: str, table: dict, allowed: set):
    unknown = set(table) - allowed
    if unknown:
        raise ConfigError(
            f"unknown key(s) in [{section}]: {', '.join(sorted(unknown))}")


def load_config(path) -> RunConfig:
    """Parse and fully validate a TOML run configuration.

    Unknown keys anywhere are errors.  Model, grid, and time keys that are
    absent fall back to the default table; the applied defaults are listed
    in the returned config.  When a [dimensional] section is present it
    wins over [model] and the dimensionless coefficients are derived.
    """
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"TOML parse error in {path}: {exc}")

    unknown = set(raw) - set(_SECTIONS)
    if unknown:
        raise ConfigError(f"unknown section(s): {', '.join(sorted(unknown))}")
    for section, allowed in _SECTIONS.items():
        if section in raw:
            if not isinstance(raw[section], dict):
                raise ConfigError(f"[{section}] must be a table")
            _check_keys(section, raw[section], allowed)

    applied = []

    def build(section, cls, keys):
        table = raw.get(section, {})
        kwargs = {}
        for key in keys:
            if key in table:
                kwargs[key] = table[key]
            else:
                applied.append(f"{section}.{key}")
        try:
            return cls(**kwargs)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"invalid [{section}]: {exc}")

    dimensional = None
    if "dimensional" in raw:
        dimensional = build("dimensional", DimensionalParams,
                            _DIMENSIONAL_KEYS)
        model = derive_dimensionless(dimensional)
        if "model" in raw:
            applied.append("model section overridden by [dimensional]")
    else:
        model = build("model", ModelParams, _MODEL_KEYS)

    grid = build("grid", GridSpec, _GRID_KEYS)
    time = build("time", TimeSpec, _TIME_KEYS)

    init_table = raw.get("initial", {})
    if "profile_file" in init_table:
        extra = set(init_table) - {"profile_file"}
        if extra:
            raise ConfigError(
                f"[initial] profile_file excludes uniform keys: {extra}")
        initial = InitialData(profile_file=str(
            (path.parent / init_table["profile_file"])))
    elif init_table:
        uniform = []
        for key in ("v1", "v2", "sigma1", "sigma2"):
            if key in init_table:
                uniform.append(float(init_table[key]))
            else:
                uniform.append(DEFAULT_INITIAL[key])
                applied.append(f"initial.{key}")
        initial = InitialData(uniform=tuple(uniform))
    else:
        initial = InitialData(default_seed=True)
        applied.append("initial (default predator seed profile)")

    mode = raw.get("experiment", {}).get("mode", "run")
    if mode not in ("run", "sweep", "verify"):
        raise ConfigError(f"experiment.mode must be run|sweep|verify, got {mode!r}")
    if "experiment" not in raw or "mode" not in raw.get("experiment", {}):
        applied.append("experiment.mode")

    sweep_table = raw.get("sweep", {})
    sweep_c_rho = tuple(float(x) for x in sweep_table.get("c_rho", ()))
    sweep_f = tuple(float(x) for x in sweep_table.get("f", ()))
    threshold = float(sweep_table.get("threshold", 1e-3))
    for name, axis in (("c_rho", sweep_c_rho), ("f", sweep_f)):
        if axis and np.any(np.diff(axis) <= 0):
            raise ConfigError(f"sweep.{name} must be strictly increasing")
    if mode == "sweep":
        if not sweep_c_rho or not sweep_f:
            raise ConfigError("sweep mode requires sweep.c_rho and sweep.f")
        if dimensional is None:
            raise ConfigError("sweep mode requires a [dimensional] section")

    verify_table = raw.get("verify", {})
    suites = tuple(verify_table.get("suites", ("all",)))
    seed = int(verify_table.get("seed", 0))

    return RunConfig(model=model, dimensional=dimensional, grid=grid,
                     time=time, initial=initial, experiment=mode,
                     sweep_c_rho=sweep_c_rho, sweep_f=sweep_f,
                     threshold=threshold, verify_suites=suites, seed=seed,
                     applied_defaults=tuple(applied))


def _fmt(x) -> str:
    """Full-double-precision decimal text, stable across runs."""
    return format(float(x), ".17g")


def write_config_echo(cfg: RunConfig, path) -> str:
    """Write the fully-resolved config back out as TOML; returns its sha256.

    Loading the echo reproduces an equal configuration (defaults become
    explicit, so the echo's applied-defaults list is empty).
    """
    lines = []
    if cfg.dimensional is not None:
        lines.append("[dimensional]")
        for f in fields(DimensionalParams):
            lines.append(f"{f.name} = {_fmt(getattr(cfg.dimensional, f.name))}")
    else:
        lines.append("[model]")
        for f in fields(ModelParams):
            lines.append(f"{f.name} = {_fmt(getattr(cfg.model, f.name))}")
    lines += ["", "[grid]", f"n = {cfg.grid.n}"]
    lines += ["", "[time]", f"dt = {_fmt(cfg.time.dt)}",
              f"t_end = {_fmt(cfg.time.t_end)}",
              f"record_every = {cfg.time.record_every}"]
    lines += ["", "[initial]"]
    if cfg.initial.profile_file is not None:
        lines.append(f'profile_file = "{cfg.initial.profile_file}"')
    elif cfg.initial.uniform is not None:
        for key, value in zip(("v1", "v2", "sigma1", "sigma2"),
                              cfg.initial.uniform):
            lines.append(f"{key} = {_fmt(value)}")
    # empty [initial] section means the default seed profile
    lines += ["", "[experiment]", f'mode = "{cfg.experiment}"']
    if cfg.sweep_c_rho or cfg.sweep_f:
        lines += ["", "[sweep]"]
        if cfg.sweep_c_rho:
            lines.append("c_rho = [" + ", ".join(map(_fmt, cfg.sweep_c_rho)) + "]")
        if cfg.sweep_f:
            lines.append("f = [" + ", ".join(map(_fmt, cfg.sweep_f)) + "]")
        lines.append(f"threshold = {_fmt(cfg.threshold)}")
    lines += ["", "[verify]",
              "suites = [" + ", ".join(f'"{s}"' for s in cfg.verify_suites) + "]",
              f"seed = {cfg.seed}"]
    text = "\n".join(lines) + "\n"
    Path(path).write_text(text)
    return hashlib.sha256(text.encode()).hexdigest()


def emit_run(record: RunRecord, outdir,
             classification: Classification | None = None,
             seed: int = 0, config_hash: str = "",
             wall_time: float | None = None) -> list:
    """Write timeseries.csv, heatmap_v1.csv, heatmap_v2.csv, summary.csv.

    All numeric text carries full double precision; identical inputs produce
    byte-identical files (wall_time, off by default, is the one
    run-dependent field).
    """
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []

    ts_path = outdir / "timeseries.csv"
    with open(ts_path, "w", newline="") as fh:
        fh.write("t,avg_v1,avg_v2,sigma1,sigma2,c,F\n")
        for i in range(len(record.times)):
            fh.write(",".join(_fmt(v) for v in (
                record.times[i], record.avg_v1[i], record.avg_v2[i],
                record.sigma1[i], record.sigma2[i], record.c_value[i],
                record.f_tilde_value[i])) + "\n")
    written.append(ts_path)

    for name, heatmap in (("heatmap_v1.csv", record.heatmap_v1),
                          ("heatmap_v2.csv", record.heatmap_v2)):
        path = outdir / name
        with open(path, "w", newline="") as fh:
            n_nodes = heatmap.shape[1]
            fh.write(",".join(f"x{j}" for j in range(n_nodes)) + "\n")
            for row in heatmap:
                fh.write(",".join(_fmt(v) for v in row) + "\n")
        written.append(path)

    summary = outdir / "summary.csv"
    with open(summary, "w", newline="") as fh:
        fh.write("final_growth_rate,classification,min_v1,min_v2,"
                 "wall_time,seed,config_hash\n")
        fh.write(",".join([
            _fmt(record.final_growth_rate),
            str(classification) if classification is not None else "",
            _fmt(record.min_v1), _fmt(record.min_v2),
            _fmt(wall_time) if wall_time is not None else "",
            str(seed), config_hash]) + "\n")
    written.append(summary)
    return written


def emit_sweep(result: SweepResult, outdir) -> list:
    """Write sweep.csv: one row per (c_rho, f) cell in row-major order."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    path = outdir / "sweep.csv"
    with open(path, "w", newline="") as fh:
        fh.write("c_rho,f,growth_rate,classification\n")
        for i, c_rho in enumerate(result.c_rho_values):
            for j, f in enumerate(result.f_values):
                cls = result.classification[i, j]
                label = str(cls) if cls is not None else "error"
                fh.write(f"{_fmt(c_rho)},{_fmt(f)},"
                         f"{_fmt(result.growth_rate[i, j])},{label}\n")
    return [path]
