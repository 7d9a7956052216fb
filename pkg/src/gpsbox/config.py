"""Run configuration: flat key-value files, command-line overrides, validation.

Config file grammar (one setting per line)::

    # comment
    key = value

``value`` is one of: a number (``0.5``, ``1e-3``, ``128``), ``true`` /
``false``, ``null``, a bare or double-quoted string, or an array
``[v1, v2, ...]`` of those scalars. Keys are the :class:`RunConfig` field
names. A JSON document is also accepted; if it carries a ``"config"`` object
(the JSON output of any subcommand) that object is used, so output can be
fed straight back in.
"""
from __future__ import annotations

import dataclasses
import json
import os
import re
from dataclasses import dataclass, field

import numpy as np

from gpsbox.hamiltonian import DEFAULT_ORDER, StateLabel
from gpsbox.potentials import parse_potential

ORDER_ENV = "GPSBOX_ORDER"
FORMATS = ("table", "csv", "json")
MODES = ("small", "free")


class ConfigError(ValueError):
    """Invalid configuration value; reported with exit code 2."""


@dataclass
class RunConfig:
    potential: str = "coulomb"
    charge: float = 1.0
    delta: float | None = None
    states: list = field(default_factory=list)
    ell: int | None = None
    count: int | None = None
    rc: list = field(default_factory=list)
    rc_range: list | None = None
    order: int | None = None
    scale: float | None = None
    format: str = "table"
    output: str | None = None
    moments: bool = False
    tables: list = field(default_factory=list)
    all_n: int | None = None
    max_states: int = 10
    mode: str = "small"
    points: int = 20000
    tol: float = 1e-9

    def labels(self) -> list[StateLabel]:
        if self.states:
            return [StateLabel.parse(s) for s in self.states]
        if self.ell is not None and self.count is not None:
            return [StateLabel.from_index(self.ell, k) for k in range(self.count)]
        return []

    def make_potential(self):
        return parse_potential(self.potential, charge=self.charge, delta=self.delta)

    def resolved_order(self) -> int:
        return self.order if self.order is not None else default_order()

    def echo(self) -> dict:
        """Plain dict of every field, with the r_c range expanded to a list."""
        out = dataclasses.asdict(self)
        out["rc"] = list(self.radii())
        out["rc_range"] = None
        return out

    def radii(self) -> list[float]:
        if self.rc_range is None:
            return [float(r) for r in self.rc]
        start, stop, count = float(self.rc_range[0]), float(self.rc_range[1]), int(self.rc_range[2])
        spacing = str(self.rc_range[3]) if len(self.rc_range) > 3 else "lin"
        if spacing == "log":
            return [float(r) for r in np.geomspace(start, stop, count)]
        return [float(r) for r in np.linspace(start, stop, count)]


_FIELDS = {f.name: f for f in dataclasses.fields(RunConfig)}
_LISTS = {"states", "rc", "rc_range", "tables"}


def env_order() -> int | None:
    """Grid order from the environment override, or ``None`` if unset."""
    text = os.environ.get(ORDER_ENV)
    if text is None or text.strip() == "":
        return None
    try:
        value = int(text)
    except ValueError:
        raise ConfigError(f"{ORDER_ENV}={text!r} is not an integer") from None
    if value < 8:
        raise ConfigError(f"{ORDER_ENV}={value} must be >= 8")
    return value


def default_order() -> int:
    value = env_order()
    return DEFAULT_ORDER if value is None else value


_NUMBER = re.compile(r"[-+]?(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?$")


def _scalar(text: str):
    text = text.strip()
    if len(text) >= 2 and text[0] == text[-1] == '"':
        return text[1:-1]
    low = text.lower()
    if low in ("true", "false"):
        return low == "true"
    if low in ("null", "none", ""):
        return None
    if _NUMBER.match(text):
        return float(text) if any(c in text for c in ".eE") else int(text)
    return text


def parse_value(text: str):
    text = text.strip()
    if text.startswith("["):
        if not text.endswith("]"):
            raise ConfigError(f"unterminated array {text!r}")
        body = text[1:-1].strip()
        return [] if not body else [_scalar(item) for item in body.split(",")]
    return _scalar(text)


def parse_config_text(text: str) -> dict:
    """Key-value settings from config-file text (flat grammar or JSON)."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON config: {exc}") from None
        data = doc.get("config", doc) if isinstance(doc, dict) else None
        if not isinstance(data, dict):
            raise ConfigError("JSON config must be an object")
        return dict(data)
    data = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        data[key.strip()] = parse_value(value)
    return data


def load_config_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_config_text(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc.strerror}") from None


def build_config(file_values: dict | None, overrides: dict) -> RunConfig:
    """Merge file settings with command-line overrides and validate."""
    merged = {}
    for source in (file_values or {}, overrides):
        for key, value in source.items():
            if key == "command":
                continue
            if key not in _FIELDS:
                raise ConfigError(f"unknown config key {key!r}")
            merged[key] = value
    for key in _LISTS:
        if key in merged and merged[key] is not None and not isinstance(merged[key], list):
            merged[key] = [merged[key]]
    cfg = RunConfig(**merged)
    validate(cfg)
    return cfg


def _number(name, value, kind=float, positive=True, minimum=None):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{name} must be a number, got {value!r}")
    if kind is int and int(value) != value:
        raise ConfigError(f"{name} must be an integer, got {value!r}")
    if not np.isfinite(value):
        raise ConfigError(f"{name} must be finite, got {value!r}")
    if positive and not value > 0:
        raise ConfigError(f"{name} must be positive, got {value!r}")
    if minimum is not None and value < minimum:
        raise ConfigError(f"{name} must be >= {minimum}, got {value!r}")
    return kind(value)


def validate(cfg: RunConfig) -> None:
    """Check every field against the solver preconditions; raise ConfigError."""
    if cfg.format not in FORMATS:
        raise ConfigError(f"format must be one of {', '.join(FORMATS)}, got {cfg.format!r}")
    if cfg.mode not in MODES:
        raise ConfigError(f"mode must be one of {', '.join(MODES)}, got {cfg.mode!r}")
    cfg.charge = _number("charge", cfg.charge)
    if cfg.delta is not None:
        cfg.delta = _number("delta", cfg.delta)
    try:
        cfg.make_potential()
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    cfg.states = [str(s) for s in cfg.states]
    for s in cfg.states:
        try:
            StateLabel.parse(s)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    if cfg.ell is not None:
        cfg.ell = _number("ell", cfg.ell, int, positive=False, minimum=0)
    if cfg.count is not None:
        cfg.count = _number("count", cfg.count, int)
    cfg.rc = [_number("rc", r) for r in cfg.rc]
    if cfg.rc_range is not None:
        if len(cfg.rc_range) not in (3, 4):
            raise ConfigError("rc_range must be [start, stop, count] or [start, stop, count, lin|log]")
        start = _number("rc_range start", cfg.rc_range[0])
        stop = _number("rc_range stop", cfg.rc_range[1])
        count = _number("rc_range count", cfg.rc_range[2], int, minimum=2)
        spacing = cfg.rc_range[3] if len(cfg.rc_range) == 4 else "lin"
        if spacing not in ("lin", "log"):
            raise ConfigError(f"rc_range spacing must be lin or log, got {spacing!r}")
        if not stop > start:
            raise ConfigError("rc_range stop must exceed start")
        cfg.rc_range = [start, stop, count, spacing]
    if cfg.order is not None:
        cfg.order = _number("order", cfg.order, int, minimum=8)
    else:
        default_order()
    if cfg.scale is not None:
        cfg.scale = _number("scale", cfg.scale)
    cfg.moments = bool(cfg.moments)
    cfg.tables = [str(t).upper() for t in cfg.tables]
    if cfg.all_n is not None:
        cfg.all_n = _number("all_n", cfg.all_n, int)
    cfg.max_states = _number("max_states", cfg.max_states, int)
    cfg.points = _number("points", cfg.points, int, minimum=2000)
    cfg.tol = _number("tol", cfg.tol)
