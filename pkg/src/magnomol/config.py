"""INI-style configuration with ``[system]``, ``[sweep]`` and ``[output]`` sections.

Example::

    [system]
    omega_nu_thz = 30
    delta_a = -1
    delta_b = -0.3

    [sweep]
    axis = delta_a
    min = -2
    max = 0
    points = 401
    scale = linear
    branches = both
    workers = 4

    [output]
    format = csv
    path = fig3.csv
"""

from __future__ import annotations

import configparser
import math
import re
from dataclasses import dataclass, field
from typing import Optional

from .errors import ConfigError, InvalidParameterError
from .measures import MEASURE_GROUPS
from .model import SystemParams
from .sweep import Axis, SweepSpec

#: ``[system]`` key -> (SystemParams field, converter from config units)
SYSTEM_KEYS = {
    "omega_nu_thz": ("omega_nu", lambda x: 2 * math.pi * float(x) * 1e12),
    "delta_a": ("delta_a", float),
    "delta_m": ("delta_m", float),
    "delta_b": ("delta_b", float),
    "j": ("j_coupling", float),
    "g_a": ("g_a", float),
    "g_m": ("g_m", float),
    "n_molecules": ("n_molecules", lambda x: _int(x)),
    "kappa_a": ("kappa_a", float),
    "kappa_m": ("kappa_m", float),
    "gamma_nu": ("gamma_nu", float),
    "drive": ("drive", float),
    "temperature_k": ("temperature", float),
    "detuning_mode": ("detuning_mode", str),
}
FIELD_TO_KEY = {f: k for k, (f, _) in SYSTEM_KEYS.items()}
SWEEP_KEYS = ("axis", "min", "max", "points", "scale", "axis2", "min2", "max2", "points2",
              "scale2", "branches", "workers", "measures")
OUTPUT_KEYS = ("format", "path", "meta")
SECTIONS = {"system": tuple(SYSTEM_KEYS), "sweep": SWEEP_KEYS, "output": OUTPUT_KEYS}


def _int(text) -> int:
    value = float(text)
    if value != int(value):
        raise ValueError(f"expected an integer, got {text}")
    return int(value)


@dataclass
class Config:
    params: SystemParams = field(default_factory=SystemParams)
    sweep: dict = field(default_factory=dict)
    output: dict = field(default_factory=dict)

    def sweep_spec(self, workers: Optional[int] = None) -> SweepSpec:
        """Build a :class:`SweepSpec` from the ``[sweep]`` section."""
        s = self.sweep
        if "axis" not in s:
            raise ConfigError("[sweep] section needs an 'axis' key")
        try:
            axes = [_axis(s, "")]
            if "axis2" in s:
                axes.append(_axis(s, "2"))
            measures = tuple(
                m.strip() for m in s.get("measures", ",".join(MEASURE_GROUPS)).split(",") if m.strip()
            )
            n_workers = workers if workers is not None else int(s.get("workers", 1))
            return SweepSpec(
                base=self.params,
                axes=axes,
                barnett_branches=s.get("branches", "both"),
                measures_requested=measures,
                worker_count=n_workers,
                name="config",
            )
        except (ValueError, KeyError) as exc:
            raise ConfigError(f"invalid [sweep] section: {exc}") from exc


def _axis(s, suffix) -> Axis:
    name = s["axis" + suffix]
    name = SYSTEM_KEYS.get(name, (name,))[0]
    return Axis(
        name,
        float(s["min" + suffix]),
        float(s["max" + suffix]),
        _int(s.get("points" + suffix, 2)),
        s.get("scale" + suffix, "linear"),
    )


def _line_of(text: str, section: str, key: str) -> Optional[int]:
    current = None
    for n, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        m = re.match(r"\[([^\]]+)\]", stripped)
        if m:
            current = m.group(1).strip()
            continue
        if current == section and re.match(rf"{re.escape(key)}\s*[=:]", stripped):
            return n
    return None


def _section_line(text: str, section: str) -> Optional[int]:
    for n, line in enumerate(text.splitlines(), start=1):
        if line.strip() == f"[{section}]":
            return n
    return None


def build_params(values: dict, base: SystemParams = SystemParams(), lines: Optional[dict] = None) -> SystemParams:
    """Apply ``[system]`` key/value strings on top of ``base``."""
    changes = {}
    for key, raw in values.items():
        if key not in SYSTEM_KEYS:
            raise ConfigError(f"unknown [system] key {key!r}", (lines or {}).get(key))
        name, convert = SYSTEM_KEYS[key]
        try:
            changes[name] = convert(raw.strip())
        except ValueError as exc:
            raise ConfigError(f"{key}: invalid value {raw!r} ({exc})", (lines or {}).get(key)) from None
    try:
        return base.replace(**changes)
    except InvalidParameterError as exc:
        key = FIELD_TO_KEY.get(exc.field, exc.field)
        raise ConfigError(f"invalid {key}: {exc}", (lines or {}).get(key)) from None


def parse_config(text: str, overrides=()) -> Config:
    """Parse config text; ``overrides`` are ``key=value`` strings.

    Override keys address ``[system]`` by default, or any section with a
    ``section.key`` prefix.
    """
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.MissingSectionHeaderError as exc:
        raise ConfigError("missing section header", exc.lineno) from None
    except configparser.ParsingError as exc:
        lineno, line = exc.errors[0]
        raise ConfigError(f"cannot parse {line.strip()!r}", lineno) from None
    except (configparser.DuplicateOptionError, configparser.DuplicateSectionError) as exc:
        raise ConfigError(exc.message if hasattr(exc, "message") else str(exc), exc.lineno) from None

    sections = {name: dict(parser[name]) for name in parser.sections()}
    for name, body in sections.items():
        if name not in SECTIONS:
            raise ConfigError(f"unknown section [{name}]", _section_line(text, name))
        for key in body:
            if key not in SECTIONS[name]:
                raise ConfigError(f"unknown [{name}] key {key!r}", _line_of(text, name, key))

    lines = {key: _line_of(text, "system", key) for key in sections.get("system", {})}
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not of the form key=value")
        key, value = (s.strip() for s in item.split("=", 1))
        section, _, key = key.rpartition(".")
        section = section or "system"
        if section not in SECTIONS or key not in SECTIONS[section]:
            raise ConfigError(f"unknown override key {item.split('=', 1)[0]!r}")
        sections.setdefault(section, {})[key] = value
        if section == "system":
            lines[key] = None

    params = build_params(sections.get("system", {}), lines=lines)
    return Config(params, sections.get("sweep", {}), sections.get("output", {}))


def load_config(path=None, overrides=()) -> Config:
    text = ""
    if path is not None:
        try:
            with open(path) as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text, overrides)
