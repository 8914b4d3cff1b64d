"""Domain value types for the climbing-robot analysis library.

All quantities are SI: metres, kilograms, seconds, newtons, newton-metres,
radians.  Types are frozen dataclasses; construction never validates so
that :func:`validate_spec` can report every violation as data instead of
raising on the first one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .units import STANDARD_GRAVITY


class Side(str, Enum):
    """Which face of an inclined surface the robot clings to."""

    TOP = "top"
    UNDERNEATH = "underneath"


class ConditionKind(str, Enum):
    NON_COATED_FLAT = "non_coated_flat"
    COATED_FLAT = "coated_flat"
    COATED_CURVED = "coated_curved"


@dataclass(frozen=True)
class SurfaceCondition:
    """Steel surface finish; curved conditions carry the cylinder diameter.

    ``diameter`` is signed: positive for convex (robot on the outside),
    negative for concave.  Adhesion scaling uses its magnitude.
    """

    kind: ConditionKind
    diameter: float | None = None

    @classmethod
    def non_coated_flat(cls) -> "SurfaceCondition":
        return cls(ConditionKind.NON_COATED_FLAT)

    @classmethod
    def coated_flat(cls) -> "SurfaceCondition":
        return cls(ConditionKind.COATED_FLAT)

    @classmethod
    def coated_curved(cls, diameter: float) -> "SurfaceCondition":
        return cls(ConditionKind.COATED_CURVED, diameter)


@dataclass(frozen=True)
class ConditionFactors:
    """Per-block force scale by surface condition, each in (0, 1].

    ``curved`` maps |cylinder diameter| (m) to a factor; lookups
    interpolate linearly and clamp at the table ends.  The default table
    is a calibration: its small-diameter end is chosen so the total
    adhesion of the reference robot bottoms out at the measured 210 N
    floor (reports flag it as calibrated, not measured).
    """

    non_coated_flat: float = 1.0
    coated_flat: float = 0.9
    curved: tuple[tuple[float, float], ...] = (
        (0.100, 13.125 / 39.7),  # 16 blocks * 13.125 N = the 210 N floor
        (0.900, 0.9),
    )


@dataclass(frozen=True)
class MagnetSpec:
    """One magnet block: data-sheet force on flat bare steel, plus derating."""

    block_force_nominal: float  # N
    condition_factors: ConditionFactors = field(default_factory=ConditionFactors)


@dataclass(frozen=True)
class LinkageParams:
    """Geometry of the chassis-bending crank/slider and its feed screw.

    Lengths in metres, ``gamma`` in radians.  ``crank_len`` is the
    crank-to-slider link length; the slider is admissible only while
    |b1 - a*cos(alpha - gamma)| <= crank_len.
    """

    a: float = 0.0337
    b: float = 0.072
    b1: float = 0.045
    e: float = 0.055
    f: float = 0.011
    crank_len: float = 0.032
    gamma: float = math.radians(12.0)
    screw_pitch: float = 0.0008  # m advanced per screw revolution
    screw_gear_ratio: float = 19.0  # motor revolutions per screw revolution
    total_transform_ratio: float = 26.5  # load torque per motor torque
    feed_travel_max: float = 0.075  # m


@dataclass(frozen=True)
class MotorSpec:
    """A motor (or identical group) plus its output gearing.

    ``gear_ratio`` is the torque multiplier from motor shaft to output;
    ``stall_torque`` is per motor, in N.m.
    """

    stall_torque: float
    gear_ratio: float = 1.0
    count: int = 1


@dataclass(frozen=True)
class RobotSpec:
    """Full mechanical description of a twin-chain magnet climbing robot."""

    mass: float  # kg
    body_length: float
    body_width: float
    body_height: float
    com_height: float  # centre of mass to surface (h)
    total_height: float  # overall height used for the tip-over lever (h_r)
    contact_span: float  # first-to-last contacting block (l)
    contact_blocks_per_chain: int
    blocks_per_chain: int
    block_pitch: float
    chain_count: int
    track_width: float  # lateral distance between chain centrelines
    moment_arm: float  # block release arm at the rotation fulcrum (i)
    magnet: MagnetSpec
    linkage: LinkageParams
    drive: MotorSpec
    transform: MotorSpec


@dataclass(frozen=True)
class SurfaceSpec:
    """A climbing surface: inclination, side, curvature, friction, finish.

    ``curvature_radius`` is None for flat, else signed metres (positive =
    convex, robot outside; negative = concave, robot inside).
    """

    inclination: float  # rad, in (0, pi/2]
    side: Side
    mu: float
    condition: SurfaceCondition
    curvature_radius: float | None = None


@dataclass(frozen=True)
class Constants:
    """Physical constants; g is configurable because reported design
    arithmetic is reproduced with whichever local value a run selects."""

    g: float = STANDARD_GRAVITY


@dataclass(frozen=True)
class Violation:
    path: str
    requirement: str

    def __str__(self) -> str:
        return f"{self.path}: {self.requirement}"


@dataclass(frozen=True)
class ValidationResult:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return "; ".join(str(v) for v in self.violations)


def _positive(checks: list[Violation], path: str, value: float) -> None:
    if not value > 0:
        checks.append(Violation(path, f"must be > 0, got {value}"))


def validate_spec(spec: RobotSpec) -> ValidationResult:
    """Check every invariant of a robot spec; violations are data, not faults."""
    v: list[Violation] = []
    _positive(v, "mass", spec.mass)
    for name in ("body_length", "body_width", "body_height", "block_pitch",
                 "track_width", "moment_arm", "contact_span"):
        _positive(v, name, getattr(spec, name))
    _positive(v, "com_height", spec.com_height)
    if not spec.com_height < spec.total_height:
        v.append(Violation("com_height", f"must be < total_height "
                           f"({spec.com_height} >= {spec.total_height})"))
    if spec.contact_blocks_per_chain < 0:
        v.append(Violation("contact_blocks_per_chain", "must be >= 0"))
    if spec.contact_blocks_per_chain > spec.blocks_per_chain:
        v.append(Violation("contact_blocks_per_chain",
                           "must be <= blocks_per_chain"))
    if spec.chain_count < 1:
        v.append(Violation("chain_count", "must be >= 1"))

    _positive(v, "magnet.block_force_nominal", spec.magnet.block_force_nominal)
    factors = spec.magnet.condition_factors
    for name, factor in (("non_coated_flat", factors.non_coated_flat),
                         ("coated_flat", factors.coated_flat)):
        if not 0 < factor <= 1:
            v.append(Violation(f"magnet.condition_factors.{name}",
                               f"must be in (0, 1], got {factor}"))
    for diameter, factor in factors.curved:
        if not diameter > 0:
            v.append(Violation("magnet.condition_factors.curved",
                               f"diameters must be > 0, got {diameter}"))
        if not 0 < factor <= 1:
            v.append(Violation("magnet.condition_factors.curved",
                               f"factors must be in (0, 1], got {factor}"))

    p = spec.linkage
    for name in ("a", "b", "b1", "e", "f", "crank_len", "screw_pitch",
                 "screw_gear_ratio", "total_transform_ratio", "feed_travel_max"):
        _positive(v, f"linkage.{name}", getattr(p, name))
    if not 0 <= p.gamma < math.pi / 2:
        v.append(Violation("linkage.gamma", f"must be in [0, pi/2), got {p.gamma}"))
    if not p.b1 - p.a < p.crank_len:
        v.append(Violation("linkage.crank_len",
                           "slider domain empty: requires b1 - a < crank_len"))

    for motor_name in ("drive", "transform"):
        motor = getattr(spec, motor_name)
        _positive(v, f"{motor_name}.stall_torque", motor.stall_torque)
        _positive(v, f"{motor_name}.gear_ratio", motor.gear_ratio)
        if motor.count < 1:
            v.append(Violation(f"{motor_name}.count", "must be >= 1"))

    return ValidationResult(tuple(v))


def validate_surface(surface: SurfaceSpec) -> ValidationResult:
    v: list[Violation] = []
    if not 0 < surface.inclination <= math.pi / 2:
        v.append(Violation("inclination",
                           f"must be in (0, pi/2] rad, got {surface.inclination}"))
    _positive(v, "mu", surface.mu)
    if surface.curvature_radius is not None and surface.curvature_radius == 0:
        v.append(Violation("curvature_radius", "must be nonzero or flat"))
    if (surface.condition.kind is ConditionKind.COATED_CURVED
            and not surface.condition.diameter):
        v.append(Violation("condition.diameter",
                           "curved condition needs a nonzero diameter"))
    return ValidationResult(tuple(v))


def weight(spec: RobotSpec, c: Constants) -> float:
    """Robot weight in newtons: mass * g."""
    return spec.mass * c.g


def default_robot_spec(g: float = STANDARD_GRAVITY) -> RobotSpec:
    """The reference 3 kg twin-chain prototype this library ships with.

    Motor torques are catalogued in kgf.cm; they are converted here with
    the supplied g so that gravitational-unit reports round-trip exactly
    against the same g.
    """
    return RobotSpec(
        mass=3.0,
        body_length=0.163,
        body_width=0.145,
        body_height=0.198,
        com_height=0.046,
        total_height=0.19751,
        contact_span=0.098,
        contact_blocks_per_chain=8,
        blocks_per_chain=22,
        # contact span 98 mm covers 8 blocks -> 7 gaps of 14 mm
        block_pitch=0.014,
        chain_count=2,
        track_width=0.125,
        moment_arm=0.005,
        magnet=MagnetSpec(block_force_nominal=39.7),
        linkage=LinkageParams(),
        drive=MotorSpec(stall_torque=12.0 * g * 1e-2, gear_ratio=20 / 11, count=2),
        transform=MotorSpec(stall_torque=32.0 * g * 1e-2, gear_ratio=1.0, count=1),
    )
