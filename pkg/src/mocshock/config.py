"""
Scenario configuration: an INI file with flat sections, built-in presets,
and ``section.key=value`` overrides.

Schema (all keys optional unless a preset leaves them unset)::

    [scenario]   symmetry = sphere|cylinder
                 interaction = electric|gravity|combined
    [profile]    kind = uniform|lognormal|tabulated
                 rho0, r_max            (uniform)
                 mu, sigma, total       (lognormal)
                 path                   (tabulated CSV with columns r, rho0)
    [constants]  nondimensional = true|false
                 delta, eps0, nu0, hbar, mass
    [grids]      n_labels, n_times, n_snapshots, t_max, r_max
    [tolerances] inversion, ode, shock, pde, continuity
    [output]     directory
"""

from __future__ import annotations

import configparser
import copy
import math
from dataclasses import dataclass
from pathlib import Path

from . import profiles as prof
from .errors import ConfigError

__all__ = ["PRESETS", "ScenarioConfig", "load_config"]

_FLOAT, _INT, _BOOL, _STR = float, int, bool, str

_SCHEMA = {
    "scenario": {"symmetry": _STR, "interaction": _STR},
    "profile": {
        "kind": _STR, "rho0": _FLOAT, "r_max": _FLOAT,
        "mu": _FLOAT, "sigma": _FLOAT, "total": _FLOAT, "path": _STR,
    },
    "constants": {
        "nondimensional": _BOOL, "delta": _FLOAT, "eps0": _FLOAT,
        "nu0": _FLOAT, "hbar": _FLOAT, "mass": _FLOAT,
    },
    "grids": {
        "n_labels": _INT, "n_times": _INT, "n_snapshots": _INT,
        "t_max": _FLOAT, "r_max": _FLOAT,
    },
    "tolerances": {
        "inversion": _FLOAT, "ode": _FLOAT, "shock": _FLOAT,
        "pde": _FLOAT, "continuity": _FLOAT,
    },
    "output": {"directory": _STR},
}

# documented ranges; tightening below the floor is allowed for designed failures
_TOL_RANGES = {
    "inversion": (0.0, 1e-6),
    "ode": (1e-12, 1e-6),
    "shock": (0.0, 1e-1),
    "pde": (0.0, 1.0),
    "continuity": (0.0, 1.0),
}

_DEFAULTS = {
    "scenario": {"symmetry": "sphere", "interaction": "electric"},
    "profile": {"kind": "uniform", "rho0": 1.5, "r_max": 1.0},
    "constants": {"nondimensional": True},
    "grids": {"n_labels": 64, "n_times": 33, "n_snapshots": 8, "t_max": 10.0},
    "tolerances": {
        "inversion": 1e-10, "ode": 1e-12, "shock": 1e-4, "pde": 0.02, "continuity": 1e-3,
    },
    "output": {"directory": "out"},
}


def _merge(base, extra):
    out = copy.deepcopy(base)
    for sec, kv in extra.items():
        out.setdefault(sec, {}).update(kv)
    return out


# Uniform presets use rho0 = 3/2, giving lam = 1 for the sphere kinds.
PRESETS = {
    "uniform-electric-sphere": _merge(_DEFAULTS, {}),
    "lognormal-electric-sphere": _merge(_DEFAULTS, {
        "profile": {"kind": "lognormal", "mu": 0.0, "sigma": 1.0, "total": 1.0},
        "grids": {"r_max": 5.0, "t_max": 10.0},
    }),
    "uniform-gravity-sphere": _merge(_DEFAULTS, {
        "scenario": {"interaction": "gravity"},
        "grids": {"t_max": 1.5},
    }),
    "lognormal-gravity-sphere": _merge(_DEFAULTS, {
        "scenario": {"interaction": "gravity"},
        "profile": {"kind": "lognormal", "mu": 0.0, "sigma": 1.0, "total": 1.0},
        "grids": {"r_max": 5.0, "t_max": 2.0},
    }),
    "uniform-electric-cylinder": _merge(_DEFAULTS, {
        "scenario": {"symmetry": "cylinder"},
    }),
    "uniform-gravity-cylinder": _merge(_DEFAULTS, {
        "scenario": {"symmetry": "cylinder", "interaction": "gravity"},
        "grids": {"t_max": 1.5},
    }),
}


def _coerce(section, key, raw):
    try:
        kind = _SCHEMA[section][key]
    except KeyError:
        raise ConfigError(f"unknown key {section}.{key}") from None
    if isinstance(raw, str):
        text = raw.strip()
        try:
            if kind is _BOOL:
                low = text.lower()
                if low not in ("true", "false", "yes", "no", "1", "0"):
                    raise ValueError
                return low in ("true", "yes", "1")
            if kind is _INT:
                return int(text)
            if kind is _FLOAT:
                return float(text)
        except ValueError:
            raise ConfigError(f"{section}.{key}: cannot parse {raw!r} as {kind.__name__}") from None
        return text
    if kind is _FLOAT and isinstance(raw, (int, float)) and not isinstance(raw, bool):
        return float(raw)
    if kind is _INT and isinstance(raw, int) and not isinstance(raw, bool):
        return raw
    if isinstance(raw, kind):
        return raw
    raise ConfigError(f"{section}.{key}: expected {kind.__name__}, got {raw!r}")


@dataclass(frozen=True)
class ScenarioConfig:
    """Validated scenario. ``values`` is the full typed mapping (used for the manifest echo)."""

    values: dict
    base_dir: Path = Path(".")

    @classmethod
    def from_mapping(cls, mapping, base_dir=".") -> "ScenarioConfig":
        typed = {}
        for sec, kv in mapping.items():
            if sec not in _SCHEMA:
                raise ConfigError(f"unknown section [{sec}]")
            typed[sec] = {k: _coerce(sec, k, v) for k, v in kv.items()}
        cfg = cls(typed, Path(base_dir))
        cfg._validate()
        return cfg

    def get(self, section, key, default=None):
        return self.values.get(section, {}).get(key, default)

    def _need(self, section, key):
        v = self.get(section, key)
        if v is None:
            raise ConfigError(f"missing required key {section}.{key}")
        return v

    def _validate(self):
        sym = self._need("scenario", "symmetry")
        inter = self._need("scenario", "interaction")
        try:
            prof.Symmetry(sym)
            prof.Interaction(inter)
        except ValueError as exc:
            raise ConfigError(f"[scenario]: {exc}") from None
        for k in ("n_labels", "n_times", "n_snapshots"):
            if self._need("grids", k) < 8:
                raise ConfigError(f"grids.{k} must be >= 8")
        if not self._need("grids", "t_max") > 0:
            raise ConfigError("grids.t_max must be > 0")
        r_max = self.get("grids", "r_max")
        if r_max is not None and not r_max > 0:
            raise ConfigError("grids.r_max must be > 0")
        for k, (lo, hi) in _TOL_RANGES.items():
            v = self._need("tolerances", k)
            if not lo <= v <= hi:
                raise ConfigError(f"tolerances.{k} = {v!r} outside [{lo}, {hi}]")
        if self.get("constants", "nondimensional", False):
            for k in ("delta", "eps0", "nu0", "hbar", "mass"):
                v = self.get("constants", k)
                if v is not None and v != 1.0:
                    raise ConfigError(
                        f"constants.{k} = {v!r} conflicts with constants.nondimensional = true"
                    )
        self.profile()
        self.physics()

    # -- derived objects ----------------------------------------------------
    def physics(self) -> prof.PhysicsParams:
        c = self.values.get("constants", {})
        sym = prof.Symmetry(self.get("scenario", "symmetry"))
        inter = prof.Interaction(self.get("scenario", "interaction"))
        if c.get("nondimensional", False):
            return prof.PhysicsParams.nondimensional(sym, inter)
        return prof.PhysicsParams(
            symmetry=sym,
            interaction=inter,
            delta=c.get("delta", 1.0),
            eps0=c.get("eps0", 1.0),
            nu0=c.get("nu0", 1.0),
            hbar=c.get("hbar", 1.0),
            particle_mass=c.get("mass", 1.0),
        )

    def profile(self):
        kind = self._need("profile", "kind")
        if kind == "uniform":
            return prof.Uniform(self._need("profile", "rho0"), self._need("profile", "r_max"))
        if kind == "lognormal":
            return prof.Lognormal(
                self.get("profile", "mu", 0.0),
                self.get("profile", "sigma", 1.0),
                self.get("profile", "total", 1.0),
            )
        if kind == "tabulated":
            path = Path(self._need("profile", "path"))
            if not path.is_absolute():
                path = self.base_dir / path
            if not path.exists():
                raise ConfigError(f"profile.path: {path} does not exist")
            return prof.Tabulated.from_csv(path)
        raise ConfigError(f"profile.kind must be uniform, lognormal or tabulated, not {kind!r}")

    def label_range(self) -> tuple[float, float]:
        """Smallest and largest Lagrangian label of the simulation grid."""
        p = self.profile()
        lo, hi = p.support
        r_max = self.get("grids", "r_max")
        if r_max is not None:
            hi = min(hi, r_max)
        if not math.isfinite(hi):
            raise ConfigError("grids.r_max is required for profiles of unbounded support")
        n = self.get("grids", "n_labels")
        return max(lo, hi / n), hi

    def echo(self) -> dict:
        """Lossless typed copy; ``from_mapping(echo())`` reproduces this config."""
        return copy.deepcopy(self.values)


def load_config(path=None, preset=None, overrides=()) -> ScenarioConfig:
    """Build a config from a preset and/or INI file, then apply ``section.key=value`` overrides."""
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r}; choose from {', '.join(sorted(PRESETS))}")
        mapping = copy.deepcopy(PRESETS[preset])
    else:
        mapping = copy.deepcopy(_DEFAULTS)
    base_dir = Path(".")
    if path is not None:
        path = Path(path)
        parser = configparser.ConfigParser(interpolation=None)
        try:
            with open(path) as fh:
                parser.read_file(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        except configparser.Error as exc:
            raise ConfigError(f"{path}: {exc}") from None
        file_map = {sec: dict(parser.items(sec)) for sec in parser.sections()}
        if file_map.get("profile", {}).get("kind") not in (None, mapping["profile"].get("kind")):
            # switching profile kind drops the preset's parameters for the old kind
            mapping["profile"] = {}
        mapping = _merge(mapping, file_map)
        base_dir = path.parent
    for item in overrides:
        key, sep, value = item.partition("=")
        section, dot, name = key.strip().partition(".")
        if not sep or not dot or not name:
            raise ConfigError(f"override {item!r} must look like section.key=value")
        if section == "profile" and name == "kind" and value.strip() != mapping.get("profile", {}).get("kind"):
            mapping["profile"] = {}
        mapping.setdefault(section, {})[name] = value
    return ScenarioConfig.from_mapping(mapping, base_dir)
