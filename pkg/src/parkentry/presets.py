"""Bundled car presets and user preset directories."""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .vehicle import CarDimensions

PRESET_DIR_ENV = "PARKENTRY_PRESET_DIR"


@dataclass(frozen=True)
class CarPreset:
    name: str
    dims: CarDimensions
    label: str = ""


# w, d_f, d_r, b [m], phi_max [deg]
_TABLE = {
    "mid-sized": ("\"mid-sized vehicle\"", 1.8, 3.7, 1.0, 2.7, 45.0),
    "zoe": ("Renault ZOE", 1.771, 3.427, 0.657, 2.588, 33.0),
    "corsa": ("Opel Corsa", 1.532, 3.212, 0.410, 2.343, 32.0),
    "transporter": ("Volkswagen transporter", 1.994, 4.308, 1.192, 3.400, 36.0),
    "amg-gt": ("Mercedes-Benz AMG GT", 1.939, 3.528, 1.016, 2.630, 32.0),
}

BUILTIN: dict[str, CarPreset] = {
    key: CarPreset(key, CarDimensions.from_degrees(*vals[1:]), vals[0]) for key, vals in _TABLE.items()
}


def load_preset_file(path: Path) -> CarPreset:
    """Read a ``[car]`` section with ``w, d_f, d_r, b, phi_max_deg`` (and optional ``name``)."""
    cp = configparser.ConfigParser()
    cp.read(path)
    if "car" not in cp:
        raise ValueError(f"{path}: missing [car] section")
    sec = cp["car"]
    try:
        dims = CarDimensions.from_degrees(
            sec.getfloat("w"), sec.getfloat("d_f"), sec.getfloat("d_r"),
            sec.getfloat("b"), sec.getfloat("phi_max_deg"),
        )
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{path}: invalid car entry ({exc})") from exc
    name = sec.get("name", path.stem)
    return CarPreset(name, dims, sec.get("label", name))


def user_presets(directory: Optional[str] = None) -> dict[str, CarPreset]:
    directory = directory or os.environ.get(PRESET_DIR_ENV)
    if not directory:
        return {}
    found = {}
    for path in sorted(Path(directory).glob("*.ini")):
        preset = load_preset_file(path)
        found[preset.name] = preset
    return found


def all_presets(directory: Optional[str] = None) -> dict[str, CarPreset]:
    presets = dict(BUILTIN)
    presets.update(user_presets(directory))
    return presets


def get_preset(name: str, directory: Optional[str] = None) -> CarPreset:
    presets = all_presets(directory)
    try:
        return presets[name]
    except KeyError:
        raise KeyError(f"unknown car preset {name!r}; known: {', '.join(sorted(presets))}") from None
