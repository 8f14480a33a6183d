"""Run configuration: a single YAML mapping drives every subcommand.

Unknown keys are rejected.  Defaults reproduce the showcase chain: L=4,
t1=t2=1, Ising model, J0=5.0 with charge noise sigma_J=3.0, strong onsite
fields h0=2e4 with sigma_h=50.0, initial state "1000", bulk observable z3,
200-period horizon, 100 realizations.  When a sweep config gives no axes,
the default grid sweeps epsilon over [0, 0.1] in 21 steps.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Optional

import numpy as np
import yaml

from .errors import ConfigError
from .model import SAMPLING_MODES, DisorderDistribution, FloquetDriveSpec
from .sweep import DEFAULT_WORK_BUDGET, SweepAxis

DEFAULT_EPSILON_AXIS = ("epsilon", 0.0, 0.1, 21)

_FIELD_DOC = {
    "L": "chain length (default 4)",
    "epsilon": "pi-pulse error (default 0.04)",
    "t1": "pulse segment duration (default 1.0)",
    "t2": "interaction segment duration (default 1.0)",
    "model": 'interaction kind: "ising" or "heisenberg" (default ising)',
    "h2i_pulses": "even Heisenberg-to-Ising pulse count, 0 = none (default 0)",
    "J0": "mean bond coupling (default 5.0)",
    "sigma_J": "bond-coupling half-width / charge noise (default 3.0)",
    "h0": "mean onsite field (default 2.0e4)",
    "sigma_h": "onsite-field half-width / magnetic noise (default 50.0)",
    "initial_state": 'bitstring, "all", or "random:N" (default "1000")',
    "observable": "z<k> | lifetime | fspt, scalar or list (default z3)",
    "horizon": "even number of periods to evolve (default 200)",
    "realizations": "disorder realizations per cell (default 100)",
    "seed": "campaign seed (default 1)",
    "threshold": "lifetime threshold on the autocorrelator (default 0.1)",
    "axes": "sweep axes: [{name, values} | {name, min, max, count}]",
    "output": "output path (default derived from the subcommand)",
    "format": 'output format: "csv" or "json" (default csv)',
    "workers": "worker processes (default 1)",
    "work_budget": "max cells x realizations x horizon (default 1e10)",
    "disorder_sampling": 'bond sampling: "support" or "clip" (default support)',
    "lengths": "scaling: chain lengths (default [3, 4, 5, 6])",
    "horizon_cap": "scaling: lifetime horizon cap in periods (default 1e7)",
    "h2i_counts": "h2i: pulse counts to sweep (default [8, 64, 256])",
    "include_ising_reference": "h2i: also run the Ising reference (default true)",
}


@dataclass(frozen=True)
class RunConfig:
    L: int = 4
    epsilon: float = 0.04
    t1: float = 1.0
    t2: float = 1.0
    model: str = "ising"
    h2i_pulses: int = 0
    J0: float = 5.0
    sigma_J: float = 3.0
    h0: float = 2.0e4
    sigma_h: float = 50.0
    initial_state: str = "1000"
    observable: tuple[str, ...] = ("z3",)
    horizon: int = 200
    realizations: int = 100
    seed: int = 1
    threshold: float = 0.1
    axes: Optional[tuple[SweepAxis, ...]] = None
    output: Optional[str] = None
    format: str = "csv"
    workers: int = 1
    work_budget: float = DEFAULT_WORK_BUDGET
    disorder_sampling: str = "support"
    lengths: tuple[int, ...] = (3, 4, 5, 6)
    horizon_cap: int = 10**7
    h2i_counts: tuple[int, ...] = (8, 64, 256)
    include_ising_reference: bool = True

    def distribution(self) -> DisorderDistribution:
        return DisorderDistribution(
            J0=self.J0, sigma_J=self.sigma_J, h0=self.h0, sigma_h=self.sigma_h
        )

    def drive_spec(self) -> FloquetDriveSpec:
        return FloquetDriveSpec(
            L=self.L,
            epsilon=self.epsilon,
            distribution=self.distribution(),
            t1=self.t1,
            t2=self.t2,
            model_kind=self.model,
            h2i_pulses=self.h2i_pulses,
        )

    def sweep_axes(self) -> tuple[SweepAxis, ...]:
        if self.axes is not None:
            return self.axes
        name, lo, hi, count = DEFAULT_EPSILON_AXIS
        return (SweepAxis.linear(name, lo, hi, count),)

    def resolved(self) -> dict:
        """Plain-dict view of every resolved setting, for JSON metadata."""
        out = dataclasses.asdict(self)
        out["observable"] = list(self.observable)
        out["lengths"] = list(self.lengths)
        out["h2i_counts"] = list(self.h2i_counts)
        out["axes"] = [
            {"name": a.name, "values": [_plain_axis_value(v) for v in a.values]}
            for a in self.sweep_axes()
        ]
        return out


def _plain_axis_value(value):
    if isinstance(value, str):
        return value
    if float(value) == int(value):
        return int(value) if isinstance(value, (int, np.integer)) else float(value)
    return float(value)


def _parse_axis(entry, index: int) -> SweepAxis:
    if not isinstance(entry, dict):
        raise ConfigError(f"axes[{index}] must be a mapping, got {type(entry).__name__}")
    extra = set(entry) - {"name", "values", "min", "max", "count"}
    if extra:
        raise ConfigError(f"axes[{index}] has unknown keys: {sorted(extra)}")
    if "name" not in entry:
        raise ConfigError(f"axes[{index}] is missing 'name'")
    name = str(entry["name"])
    if "values" in entry:
        if any(k in entry for k in ("min", "max", "count")):
            raise ConfigError(
                f"axes[{index}] mixes explicit values with a min/max/count grid"
            )
        values = entry["values"]
        if not isinstance(values, (list, tuple)):
            raise ConfigError(f"axes[{index}].values must be a list")
        if name == "initial_state":
            values = tuple(str(v) for v in values)
        return SweepAxis(name, tuple(values))
    missing = [k for k in ("min", "max", "count") if k not in entry]
    if missing:
        raise ConfigError(f"axes[{index}] is missing {missing} (or use 'values')")
    return SweepAxis.linear(name, float(entry["min"]), float(entry["max"]), int(entry["count"]))


_INT_FIELDS = {"L", "h2i_pulses", "horizon", "realizations", "seed", "workers", "horizon_cap"}
_FLOAT_FIELDS = {"epsilon", "t1", "t2", "J0", "sigma_J", "h0", "sigma_h", "threshold", "work_budget"}


def config_from_dict(data: dict) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError(f"config must be a mapping, got {type(data).__name__}")
    known = set(_FIELD_DOC)
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    kwargs = {}
    for key, value in data.items():
        if key == "axes":
            if value is None:
                continue
            if not isinstance(value, list):
                raise ConfigError("axes must be a list of axis mappings")
            kwargs["axes"] = tuple(_parse_axis(entry, i) for i, entry in enumerate(value))
        elif key == "observable":
            items = value if isinstance(value, (list, tuple)) else [value]
            kwargs["observable"] = tuple(str(v) for v in items)
        elif key == "lengths":
            kwargs["lengths"] = tuple(int(v) for v in value)
        elif key == "h2i_counts":
            kwargs["h2i_counts"] = tuple(int(v) for v in value)
        elif key == "initial_state":
            kwargs["initial_state"] = str(value)
        elif key in _INT_FIELDS:
            kwargs[key] = _coerce_int(key, value)
        elif key in _FLOAT_FIELDS:
            kwargs[key] = _coerce_float(key, value)
        elif key == "include_ising_reference":
            if not isinstance(value, bool):
                raise ConfigError(f"{key} must be true or false, got {value!r}")
            kwargs[key] = value
        else:  # string fields: model, output, format, disorder_sampling
            kwargs[key] = None if value is None else str(value)
    config = RunConfig(**kwargs)
    _validate(config)
    return config


def _coerce_int(key: str, value) -> int:
    value = _numeric(key, value)
    if float(value) != int(value):
        raise ConfigError(f"{key} must be an integer, got {value!r}")
    return int(value)


def _coerce_float(key: str, value) -> float:
    return float(_numeric(key, value))


def _numeric(key: str, value):
    # YAML 1.1 reads exponents without a sign ("2.0e4") as strings; accept
    # them anyway.
    if isinstance(value, str):
        try:
            return float(value)
        except ValueError:
            raise ConfigError(f"{key} must be a number, got {value!r}") from None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{key} must be a number, got {value!r}")
    return value


def _validate(config: RunConfig) -> None:
    try:
        config.drive_spec()
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if config.format not in ("csv", "json"):
        raise ConfigError(f'format must be "csv" or "json", got {config.format!r}')
    if config.disorder_sampling not in SAMPLING_MODES:
        raise ConfigError(
            f"disorder_sampling must be one of {SAMPLING_MODES}, "
            f"got {config.disorder_sampling!r}"
        )
    if config.horizon < 2 or config.horizon % 2:
        raise ConfigError(f"horizon must be an even count >= 2, got {config.horizon}")
    if config.horizon_cap < 2 or config.horizon_cap % 2:
        raise ConfigError(
            f"horizon_cap must be an even count >= 2, got {config.horizon_cap}"
        )
    if config.realizations < 1:
        raise ConfigError("realizations must be >= 1")
    if config.workers < 1:
        raise ConfigError("workers must be >= 1")
    if not 0.0 < config.threshold < 1.0:
        raise ConfigError(f"threshold must lie in (0, 1), got {config.threshold}")
    if not config.observable:
        raise ConfigError("at least one observable is required")


def load_config(path: str) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = yaml.safe_load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f" (line {mark.line + 1}, column {mark.column + 1})" if mark else ""
        raise ConfigError(f"{path}: YAML parse error{where}: {exc}") from exc
    if data is None:
        data = {}
    try:
        return config_from_dict(data)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def field_documentation() -> dict[str, str]:
    return dict(_FIELD_DOC)
