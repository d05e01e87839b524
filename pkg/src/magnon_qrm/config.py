"""INI-style run configuration with explicit energy units.

Energies are written as ``<number> <unit>`` with unit ``wq`` (multiples of
the first qubit splitting), ``GHz`` (cyclic) or ``meV``. Unknown sections or
keys are rejected.
"""

from __future__ import annotations

import configparser
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ModelError
from .model import MEV_TO_GHZ, MaterialParams, ModelParams, QubitParams


class ConfigError(ModelError, ValueError):
    """Malformed or inconsistent configuration."""


ENERGY_UNITS = {"wq": None, "ghz": 1.0, "mev": MEV_TO_GHZ}

_QUBIT_KEYS = {f"{base}{n}": "energy" for base in ("omega_q", "g_r", "g_cr") for n in (1, 2, 3)}

SCHEMA: dict[str, dict[str, str]] = {
    "model": {"omega_q": "energy", "omega0": "energy", "g_r": "energy", "g_cr": "energy",
              "n_qubits": "int", "n_max": "int", **_QUBIT_KEYS},
    "material": {"j": "energy", "s": "float", "k_x": "energy", "k_y": "energy", "k_z": "energy",
                 "zeeman": "energy", "lattice_constant": "float", "n_f": "int", "l": "int"},
    "coupling": {"j_int": "energy", "n_int": "int", "psi2": "float", "monolayers": "int"},
    "run": {"omega0_min": "energy", "omega0_max": "energy", "n_points": "int", "n_levels": "int",
            "threads": "int", "omega0": "str", "periods": "float", "initial": "str",
            "gr_grid": "energy_list", "gcr_grid": "energy_list", "check": "bool"},
    "gap": {"window": "energy_list", "states": "str", "threshold": "energy"},
}

_ENERGY_RE = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*([A-Za-z]+)\s*$")


@dataclass(frozen=True)
class Energy:
    value: float
    unit: str  # "wq", "ghz" or "mev"

    def in_ghz(self) -> float:
        if self.unit == "wq":
            raise ConfigError("cannot convert an omega_q-relative energy to GHz")
        return self.value * ENERGY_UNITS[self.unit]

    def in_mev(self) -> float:
        return self.in_ghz() / MEV_TO_GHZ


def parse_energy(text: str, key: str = "?") -> Energy:
    m = _ENERGY_RE.match(text)
    if not m:
        raise ConfigError(f"{key}: expected '<number> <unit>' with unit wq|GHz|meV, got {text!r}")
    unit = m.group(2).lower()
    if unit not in ENERGY_UNITS:
        raise ConfigError(f"{key}: unknown energy unit {m.group(2)!r}; use wq, GHz or meV")
    return Energy(float(m.group(1)), unit)


def _convert(kind: str, text: str, key: str):
    try:
        if kind == "energy":
            return parse_energy(text, key)
        if kind == "energy_list":
            return [parse_energy(t, key) for t in text.split(",") if t.strip()]
        if kind == "int":
            return int(text)
        if kind == "float":
            return float(text)
        if kind == "bool":
            low = text.strip().lower()
            if low not in ("true", "false", "yes", "no", "1", "0"):
                raise ValueError(text)
            return low in ("true", "yes", "1")
        return text.strip()
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {text!r} as {kind}") from None


@dataclass
class RunConfig:
    sections: dict[str, dict] = field(default_factory=dict)
    gaps: list[tuple[str, dict]] = field(default_factory=list)

    def section(self, name: str) -> dict:
        return self.sections.get(name, {})

    def require(self, section: str, key: str):
        try:
            return self.sections[section][key]
        except KeyError:
            raise ConfigError(f"missing key [{section}] {key}") from None


def load_config(source: str | Path, is_text: bool = False) -> RunConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"), interpolation=None)
    parser.optionxform = str.lower
    try:
        if is_text:
            parser.read_string(source)
        else:
            with open(source, encoding="utf-8") as fh:
                parser.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    cfg = RunConfig()
    for name in parser.sections():
        kind = "gap" if name.lower().startswith("gap") else name.lower()
        if kind not in SCHEMA:
            raise ConfigError(f"unknown section [{name}]")
        values = {}
        for key, text in parser.items(name):
            if key not in SCHEMA[kind]:
                raise ConfigError(f"unknown key [{name}] {key}")
            values[key] = _convert(SCHEMA[kind][key], text, f"[{name}] {key}")
        if kind == "gap":
            cfg.gaps.append((name, values))
        else:
            cfg.sections[kind] = values
    return cfg


def _to_wq(e: Energy, wq_ghz: float | None, key: str) -> float:
    if e.unit == "wq":
        return e.value
    if wq_ghz is None:
        raise ConfigError(f"{key}: absolute units need omega_q in absolute units too")
    return e.in_ghz() / wq_ghz


def model_scale(cfg: RunConfig) -> float | None:
    """omega_q of qubit 1 in GHz, or None when the model block is purely relative."""
    m = cfg.section("model")
    wq = m.get("omega_q1", m.get("omega_q"))
    if wq is None:
        return None
    return None if wq.unit == "wq" else wq.in_ghz()


def energy_wq(cfg: RunConfig, e: Energy, key: str = "?") -> float:
    return _to_wq(e, model_scale(cfg), key)


def model_params(cfg: RunConfig, omega0: float | None = None, n_max: int | None = None) -> ModelParams:
    """Model block in units of the first qubit's splitting."""
    m = cfg.section("model")
    if "omega_q" not in m and "omega_q1" not in m:
        raise ConfigError("missing key [model] omega_q")
    scale = model_scale(cfg)
    n_q = m.get("n_qubits", 3)
    if n_q not in (1, 2, 3):
        raise ConfigError(f"[model] n_qubits must be 1, 2 or 3, got {n_q}")
    qubits = []
    for n in range(1, n_q + 1):
        vals = []
        for base in ("omega_q", "g_r", "g_cr"):
            e = m.get(f"{base}{n}", m.get(base))
            if e is None:
                raise ConfigError(f"missing key [model] {base} (or {base}{n})")
            vals.append(_to_wq(e, scale, f"[model] {base}"))
        qubits.append(QubitParams(*vals))
    if omega0 is None:
        omega0 = _to_wq(m["omega0"], scale, "[model] omega0") if "omega0" in m else 3.0
    return ModelParams(omega0, tuple(qubits), n_max or m.get("n_max", 10))


def material_params(cfg: RunConfig) -> MaterialParams:
    mat = cfg.section("material")

    def mev(key, default=0.0):
        return mat[key].in_mev() if key in mat else default

    if "j" not in mat:
        raise ConfigError("missing key [material] j")
    return MaterialParams(J=mev("j"), S=mat.get("s", 0.5), K_x=mev("k_x"), K_y=mev("k_y"),
                          K_z=mev("k_z"), zeeman=mev("zeeman"),
                          lattice_constant=mat.get("lattice_constant", 1.0), N_F=mat.get("n_f", 1))
