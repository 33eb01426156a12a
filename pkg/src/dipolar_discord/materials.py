"""SI bridge: dipolar coupling constant of a proton pair and discord predictions.

Preset table file format, one record per line (``#`` starts a comment)::

    name  gamma[rad s^-1 T^-1]  r[m]
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .asymptotics import high_t_discord
from .correlations import discord_thermal_zero_field
from .extremum import solve_zero_field_max


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = 1.054571817e-34       # J s
    k_b: float = 1.380649e-23           # J / K
    mu0_over_4pi: float = 1e-7          # T m / A
    gamma_proton: float = 2.675e8       # rad / (s T)


CONSTANTS = PhysicalConstants()


@dataclass(frozen=True)
class MaterialSpec:
    name: str
    gamma: float
    r: float

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError(f"gyromagnetic ratio must be positive, got {self.gamma}")
        if not self.r > 0:
            raise ValueError(f"interspin distance must be positive, got {self.r}")


@dataclass(frozen=True)
class MaterialPrediction:
    name: str
    d_joule: float
    d_kelvin: float
    t_max: float
    q_max: float
    temperature: Optional[float] = None
    q_at: Optional[float] = None
    q_at_series: Optional[float] = None


PRESETS = {
    "gypsum": MaterialSpec("gypsum", CONSTANTS.gamma_proton, 0.158e-9),
    "dichloroethane": MaterialSpec("dichloroethane", CONSTANTS.gamma_proton, 0.17e-9),
}


def load_presets(path, base: Optional[dict] = None) -> dict:
    """Presets from a ``name gamma r`` text file, layered over ``base`` (default: built-ins)."""
    table = dict(PRESETS if base is None else base)
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 3:
            raise ValueError(f"{path}:{lineno}: expected 'name gamma r', got {line!r}")
        name, gamma, r = fields[0], float(fields[1]), float(fields[2])
        table[name] = MaterialSpec(name, gamma, r)
    return table


def dipolar_constant(spec: MaterialSpec, constants: PhysicalConstants = CONSTANTS):
    """(D in joules, D / k_B in kelvin) with D = mu0 gamma^2 hbar^2 / (8 pi r^3)."""
    d_joule = constants.mu0_over_4pi * spec.gamma ** 2 * constants.hbar ** 2 / (2.0 * spec.r ** 3)
    return d_joule, d_joule / constants.k_b


def predict(spec: MaterialSpec, temperature: Optional[float] = None,
            constants: PhysicalConstants = CONSTANTS) -> MaterialPrediction:
    """Discord maximum of a dipolar pair in zero field; optionally Q at ``temperature`` (K)."""
    d_joule, d_kelvin = dipolar_constant(spec, constants)
    ext = solve_zero_field_max(-2.0, cross_check=False)
    q_at = q_series = None
    if temperature is not None:
        if not temperature > 0:
            raise ValueError(f"temperature must be positive, got {temperature}")
        x = d_kelvin / temperature
        q_at = discord_thermal_zero_field(-2.0, x)
        q_series = high_t_discord(x)
    return MaterialPrediction(
        name=spec.name, d_joule=d_joule, d_kelvin=d_kelvin,
        t_max=ext.t_m * d_kelvin, q_max=ext.q_m,
        temperature=temperature, q_at=q_at, q_at_series=q_series,
    )
