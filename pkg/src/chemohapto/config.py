"""Line-oriented ``section.key = value`` scenario configuration."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .model import Grid, Params

FAMILIES = ("constant", "cosine-bump", "offset-gaussian-clamped")
REQUIRED = ("scenario", "grid.cells", "horizon")


class ConfigError(ValueError):
    pass


@dataclass
class InitSpec:
    family: str = "cosine-bump"
    base: tuple = (1.0, 0.5, 0.6)
    amp: tuple = (0.3, 0.3, 0.3)
    modes: tuple = (1, 2, 1)


@dataclass
class Config:
    scenario: str
    grid: Grid
    horizon: float
    params: Params = field(default_factory=Params)
    init: InitSpec = field(default_factory=InitSpec)
    dt: float | None = 0.01  # None means "auto" (CFL-clamped)
    theta: float = 1.0
    cfl_safety: float = 0.25
    max_dt: float = 0.1
    positivity_floor: float = 0.0
    cadence: float = 0.5
    snapshot_times: tuple = ()
    output_dir: str | None = None
    lr: tuple = (2.0, 4.0)
    fit_window: tuple = (0.5, 1.0)


def _floats(text: str) -> list[float]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        out.append(float(part))
    return out


def _ints(text: str) -> list[int]:
    vals = _floats(text)
    if any(v != int(v) for v in vals):
        raise ValueError(f"expected integers, got {text!r}")
    return [int(v) for v in vals]


def _positive(value: float, key: str) -> float:
    if not (value > 0 and math.isfinite(value)):
        raise ConfigError(f"{key} must be positive, got {value!r}")
    return value


# key -> (kind, required-positive)
_KEYS = {
    "scenario": ("str", False),
    "grid.dim": ("int", True),
    "grid.lengths": ("floats", True),
    "grid.cells": ("ints", True),
    "params.alpha": ("float", True),
    "params.rho": ("float", True),
    "params.lambda": ("float", True),
    "params.mu": ("float", True),
    "params.gamma": ("float", True),
    "init.family": ("str", False),
    "init.p": ("float", False),
    "init.c": ("float", False),
    "init.w": ("float", False),
    "init.p_amp": ("float", False),
    "init.c_amp": ("float", False),
    "init.w_amp": ("float", False),
    "init.p_mode": ("int", False),
    "init.c_mode": ("int", False),
    "init.w_mode": ("int", False),
    "step.dt": ("float_or_auto", True),
    "step.theta": ("float", False),
    "step.cfl_safety": ("float", True),
    "step.max_dt": ("float", True),
    "step.positivity_floor": ("float", False),
    "horizon": ("float", True),
    "record.cadence": ("float", True),
    "record.snapshots": ("floats", False),
    "record.lr": ("floats", False),
    "fit.window": ("floats", False),
    "output.dir": ("str", False),
}


def _convert(key: str, raw: str):
    kind, positive = _KEYS[key]
    if kind == "str":
        return raw
    if kind == "float_or_auto" and raw.lower() == "auto":
        return None
    if kind in ("float", "float_or_auto"):
        value = float(raw)
        return _positive(value, key) if positive else value
    if kind == "int":
        (value,) = _ints(raw)
        return int(_positive(value, key)) if positive else value
    values = _floats(raw) if kind == "floats" else _ints(raw)
    if positive:
        for v in values:
            _positive(v, key)
    return tuple(values)


def parse_config(text: str) -> Config:
    """Parse ``key = value`` lines; ``#`` starts a comment.

    Unknown or repeated keys, malformed lines and non-positive values for
    positive quantities raise :class:`ConfigError`.  Numbers use a decimal
    point; commas separate list items.
    """
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key or not value:
            raise ConfigError(f"line {lineno}: empty key or value")
        if key not in _KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in raw:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            raw[key] = _convert(key, value)
        except ConfigError as exc:
            raise ConfigError(f"line {lineno}: {exc}") from None
        except ValueError:
            raise ConfigError(f"line {lineno}: cannot parse value {value!r} for {key}") from None

    missing = [k for k in REQUIRED if k not in raw]
    if missing:
        raise ConfigError("missing required keys: " + ", ".join(missing))

    cells = raw["grid.cells"]
    dim = raw.get("grid.dim", len(cells))
    if len(cells) == 1 and dim == 2:
        cells = cells * 2
    lengths = raw.get("grid.lengths", (1.0,) * dim)
    if len(lengths) == 1 and dim == 2:
        lengths = lengths * 2
    if dim not in (1, 2) or len(cells) != dim or len(lengths) != dim:
        raise ConfigError(f"grid.dim = {dim} does not match cells {cells} / lengths {lengths}")
    try:
        grid = Grid(tuple(lengths), tuple(cells))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    defaults = Params()
    params = Params(
        alpha=raw.get("params.alpha", defaults.alpha),
        rho=raw.get("params.rho", defaults.rho),
        lam=raw.get("params.lambda", defaults.lam),
        mu=raw.get("params.mu", defaults.mu),
        gamma=raw.get("params.gamma", defaults.gamma),
    )

    d = InitSpec()
    family = raw.get("init.family", d.family)
    if family not in FAMILIES:
        raise ConfigError(f"unknown init.family {family!r}; choose from {', '.join(FAMILIES)}")
    init = InitSpec(
        family=family,
        base=tuple(raw.get(f"init.{f}", b) for f, b in zip("pcw", d.base)),
        amp=tuple(raw.get(f"init.{f}_amp", a) for f, a in zip("pcw", d.amp)),
        modes=tuple(raw.get(f"init.{f}_mode", m) for f, m in zip("pcw", d.modes)),
    )

    lr = raw.get("record.lr", (2.0, 4.0))
    if any(not r >= 1 for r in lr):
        raise ConfigError(f"record.lr exponents must be >= 1 (inf allowed), got {lr}")
    window = raw.get("fit.window", (0.5, 1.0))
    if len(window) != 2 or not 0 <= window[0] < window[1] <= 1:
        raise ConfigError(f"fit.window must be two fractions 0 <= lo < hi <= 1, got {window}")
    theta = raw.get("step.theta", 1.0)
    if not 0.5 <= theta <= 1.0:
        raise ConfigError(f"step.theta must lie in [0.5, 1], got {theta}")
    cfl = raw.get("step.cfl_safety", 0.25)
    if not cfl < 1:
        raise ConfigError(f"step.cfl_safety must lie in (0, 1), got {cfl}")

    return Config(
        scenario=raw["scenario"],
        grid=grid,
        horizon=raw["horizon"],
        params=params,
        init=init,
        dt=raw.get("step.dt", 0.01),
        theta=theta,
        cfl_safety=cfl,
        max_dt=raw.get("step.max_dt", 0.1),
        positivity_floor=raw.get("step.positivity_floor", 0.0),
        cadence=raw.get("record.cadence", 0.5),
        snapshot_times=raw.get("record.snapshots", ()),
        output_dir=raw.get("output.dir"),
        lr=lr,
        fit_window=window,
    )
