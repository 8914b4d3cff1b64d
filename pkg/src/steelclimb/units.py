"""Quantity parsing and unit presentation.

Everything inside the package computes in SI (m, kg, s, N, N.m, rad).
Config files and reports may use engineering units (mm, cm, deg, kgf,
kgf.cm); conversion happens only at these boundaries.

Gravitational units are defined against an explicit g: 1 kgf = g newtons
and 1 kgf.cm = g/100 N.m.  Passing the same g used for the force
computation makes mass-based arithmetic round-trip exactly, which is what
the kgf reporting mode is for.
"""

from __future__ import annotations

import math
import re

STANDARD_GRAVITY = 9.80665  # m/s^2

_NUMBER = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")

# unit -> factor to the SI base of each dimension (g-independent units only)
_FIXED_UNITS: dict[str, dict[str, float]] = {
    "length": {"m": 1.0, "cm": 1e-2, "mm": 1e-3},
    "angle": {"rad": 1.0, "deg": math.pi / 180.0},
    "mass": {"kg": 1.0, "g": 1e-3},
    "speed": {"m/s": 1.0, "cm/s": 1e-2, "mm/s": 1e-3},
    "time": {"s": 1.0, "ms": 1e-3},
    "force": {"N": 1.0},
    "torque": {"N.m": 1.0, "Nm": 1.0, "N.cm": 1e-2},
}

# gravitational units: factor is (multiplier of g)
_GRAV_UNITS: dict[str, dict[str, float]] = {
    "force": {"kgf": 1.0},
    "torque": {"kgf.m": 1.0, "kgf.cm": 1e-2, "kg.cm": 1e-2, "kg.m": 1.0},
}


class UnitError(ValueError):
    """A quantity string could not be interpreted."""


def parse_quantity(value, dimension: str, g: float = STANDARD_GRAVITY) -> float:
    """Convert a config value to SI.

    Accepts plain numbers (already SI) or strings like ``"72 mm"``,
    ``"12 deg"``, ``"12 kgf.cm"``.  ``dimension`` selects the unit table;
    gravitational units use the supplied g.
    """
    if isinstance(value, bool):
        raise UnitError(f"expected a {dimension} quantity, got a boolean")
    if isinstance(value, (int, float)):
        return float(value)
    if not isinstance(value, str):
        raise UnitError(f"expected a number or '<value> <unit>' string, got {value!r}")

    text = value.strip()
    parts = text.split()
    if len(parts) == 1 and _NUMBER.match(parts[0]):
        return float(parts[0])
    if len(parts) != 2 or not _NUMBER.match(parts[0]):
        raise UnitError(f"cannot parse {dimension} quantity {value!r}")
    magnitude = float(parts[0])
    unit = parts[1]

    fixed = _FIXED_UNITS.get(dimension, {})
    if unit in fixed:
        return magnitude * fixed[unit]
    grav = _GRAV_UNITS.get(dimension, {})
    if unit in grav:
        return magnitude * grav[unit] * g
    known = sorted(set(fixed) | set(grav))
    raise UnitError(f"unknown {dimension} unit {unit!r} (expected one of {known})")


def parse_ratio(value) -> float:
    """Parse a gear ratio: a plain number, or ``"out:in"`` shaft turns.

    ``"1:19"`` (one output turn per 19 motor turns) gives a torque
    multiplier of 19; ``"11:20"`` gives 20/11.
    """
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if isinstance(value, str) and ":" in value:
        out_s, _, in_s = value.partition(":")
        try:
            out_turns, in_turns = float(out_s), float(in_s)
        except ValueError as exc:
            raise UnitError(f"cannot parse ratio {value!r}") from exc
        if out_turns <= 0 or in_turns <= 0:
            raise UnitError(f"ratio terms must be positive in {value!r}")
        return in_turns / out_turns
    if isinstance(value, str) and _NUMBER.match(value.strip()):
        return float(value)
    raise UnitError(f"cannot parse ratio {value!r}")


def newtons_to_kgf(force: float, g: float) -> float:
    return force / g


def newton_meters_to_kgfcm(torque: float, g: float) -> float:
    return torque / (g * 1e-2)


def kgfcm_to_newton_meters(torque_kgfcm: float, g: float) -> float:
    return torque_kgfcm * g * 1e-2


def fmt_sig(x: float, digits: int = 6) -> str:
    """Fixed significant digits for report tables (CSV keeps full repr)."""
    if x is None:
        return "-"
    if isinstance(x, float) and (math.isnan(x) or math.isinf(x)):
        return str(x)
    if x == 0:
        return "0"
    return f"{x:.{digits}g}"
