"""Config file loading.

Robot, surface and mission definitions live in YAML files whose sections
mirror the dataclass fields.  Quantities accept explicit unit suffixes
("72 mm", "12 deg", "12 kgf.cm", "20 cm/s"); bare numbers are SI.  Files
must carry a top-level ``schema_version``.  Robot sections are overlays:
anything omitted keeps the reference design's value.  Unknown keys are
errors so that typos cannot silently fall back to defaults.
"""

from __future__ import annotations

import math
from pathlib import Path

import yaml

from .control_sim import MissionScript, MissionSegment
from .model import (ConditionFactors, ConditionKind, Constants, LinkageParams,
                    MagnetSpec, MotorSpec, RobotSpec, Side, SurfaceCondition,
                    SurfaceSpec, default_robot_spec)
from .units import UnitError, parse_quantity, parse_ratio

SCHEMA_VERSION = 1


class ConfigError(ValueError):
    """A config file or section could not be interpreted."""


def load_yaml(path: str | Path) -> dict:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"{p}: {exc}") from exc
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"{p}: invalid YAML: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"{p}: expected a mapping at the top level")
    return doc


def check_schema_version(doc: dict, source: str) -> None:
    version = doc.get("schema_version")
    if version is None:
        raise ConfigError(f"{source}: missing required key schema_version")
    if version != SCHEMA_VERSION:
        raise ConfigError(f"{source}: unsupported schema_version {version!r} "
                          f"(this build reads {SCHEMA_VERSION})")


def _mapping(value, path: str) -> dict:
    if not isinstance(value, dict):
        raise ConfigError(f"{path}: expected a mapping, got {type(value).__name__}")
    return value


def _check_keys(data: dict, allowed: set[str], path: str) -> None:
    unknown = set(data) - allowed
    if unknown:
        raise ConfigError(f"{path}: unknown key(s) {sorted(unknown)}; "
                          f"expected {sorted(allowed)}")


def _quantity(data: dict, key: str, dimension: str, default: float,
              g: float, path: str) -> float:
    if key not in data or data[key] is None:
        return default
    try:
        return parse_quantity(data[key], dimension, g)
    except UnitError as exc:
        raise ConfigError(f"{path}.{key}: {exc}") from exc


def _ratio(data: dict, key: str, default: float, path: str) -> float:
    if key not in data or data[key] is None:
        return default
    try:
        return parse_ratio(data[key])
    except UnitError as exc:
        raise ConfigError(f"{path}.{key}: {exc}") from exc


def _count(data: dict, key: str, default: int, path: str) -> int:
    if key not in data or data[key] is None:
        return default
    value = data[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{path}.{key}: expected an integer count, got {value!r}")
    return value


def _number(data: dict, key: str, default: float, path: str) -> float:
    if key not in data or data[key] is None:
        return default
    value = data[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}.{key}: expected a number, got {value!r}")
    return float(value)


def read_constants(doc: dict, g_override: float | None = None) -> Constants:
    section = _mapping(doc.get("constants", {}) or {}, "constants")
    _check_keys(section, {"g"}, "constants")
    g = _number(section, "g", Constants().g, "constants")
    if g_override is not None:
        g = g_override
    if g <= 0:
        raise ConfigError(f"constants.g: must be > 0, got {g}")
    return Constants(g=g)


_CONDITION_KEYS = {"kind", "diameter"}


def build_condition(value, g: float, path: str) -> SurfaceCondition:
    if isinstance(value, str):
        try:
            kind = ConditionKind(value)
        except ValueError as exc:
            raise ConfigError(
                f"{path}: unknown condition {value!r}; expected one of "
                f"{[k.value for k in ConditionKind]}") from exc
        if kind is ConditionKind.COATED_CURVED:
            raise ConfigError(f"{path}: coated_curved needs a mapping with a diameter")
        return SurfaceCondition(kind)
    section = _mapping(value, path)
    _check_keys(section, _CONDITION_KEYS, path)
    kind_name = section.get("kind")
    try:
        kind = ConditionKind(kind_name)
    except ValueError as exc:
        raise ConfigError(f"{path}.kind: unknown condition {kind_name!r}") from exc
    diameter = None
    if "diameter" in section:
        try:
            diameter = parse_quantity(section["diameter"], "length", g)
        except UnitError as exc:
            raise ConfigError(f"{path}.diameter: {exc}") from exc
    if kind is ConditionKind.COATED_CURVED and not diameter:
        raise ConfigError(f"{path}: coated_curved needs a nonzero diameter")
    return SurfaceCondition(kind, diameter)


def _build_factors(data: dict, defaults: ConditionFactors, g: float,
                   path: str) -> ConditionFactors:
    _check_keys(data, {"non_coated_flat", "coated_flat", "curved"}, path)
    curved = defaults.curved
    if "curved" in data and data["curved"] is not None:
        raw = data["curved"]
        if not isinstance(raw, list):
            raise ConfigError(f"{path}.curved: expected a list of "
                              f"[diameter, factor] pairs")
        points = []
        for i, pair in enumerate(raw):
            if not isinstance(pair, list) or len(pair) != 2:
                raise ConfigError(f"{path}.curved[{i}]: expected "
                                  f"[diameter, factor]")
            try:
                d = parse_quantity(pair[0], "length", g)
            except UnitError as exc:
                raise ConfigError(f"{path}.curved[{i}]: {exc}") from exc
            points.append((d, float(pair[1])))
        curved = tuple(sorted(points))
    return ConditionFactors(
        non_coated_flat=_number(data, "non_coated_flat",
                                defaults.non_coated_flat, path),
        coated_flat=_number(data, "coated_flat", defaults.coated_flat, path),
        curved=curved,
    )


_ROBOT_LENGTHS = ("body_length", "body_width", "body_height", "com_height",
                  "total_height", "contact_span", "block_pitch", "track_width",
                  "moment_arm")
_ROBOT_COUNTS = ("contact_blocks_per_chain", "blocks_per_chain", "chain_count")
_LINKAGE_LENGTHS = ("a", "b", "b1", "e", "f", "crank_len", "screw_pitch",
                    "feed_travel_max")


def _build_motor(data: dict, defaults: MotorSpec, g: float, path: str) -> MotorSpec:
    _check_keys(data, {"stall_torque", "gear_ratio", "count"}, path)
    return MotorSpec(
        stall_torque=_quantity(data, "stall_torque", "torque",
                               defaults.stall_torque, g, path),
        gear_ratio=_ratio(data, "gear_ratio", defaults.gear_ratio, path),
        count=_count(data, "count", defaults.count, path),
    )


def build_robot(section: dict, c: Constants) -> RobotSpec:
    """Overlay a robot section onto the reference design."""
    base = default_robot_spec(c.g)
    path = "robot"
    allowed = {"mass", "magnet", "linkage", "drive", "transform",
               *_ROBOT_LENGTHS, *_ROBOT_COUNTS}
    _check_keys(section, allowed, path)

    fields: dict = {"mass": _quantity(section, "mass", "mass", base.mass, c.g, path)}
    for name in _ROBOT_LENGTHS:
        fields[name] = _quantity(section, name, "length",
                                 getattr(base, name), c.g, path)
    for name in _ROBOT_COUNTS:
        fields[name] = _count(section, name, getattr(base, name), path)

    magnet = base.magnet
    if "magnet" in section and section["magnet"] is not None:
        mdata = _mapping(section["magnet"], f"{path}.magnet")
        _check_keys(mdata, {"block_force_nominal", "condition_factors"},
                    f"{path}.magnet")
        factors = magnet.condition_factors
        if "condition_factors" in mdata and mdata["condition_factors"] is not None:
            factors = _build_factors(
                _mapping(mdata["condition_factors"],
                         f"{path}.magnet.condition_factors"),
                factors, c.g, f"{path}.magnet.condition_factors")
        magnet = MagnetSpec(
            block_force_nominal=_quantity(mdata, "block_force_nominal", "force",
                                          magnet.block_force_nominal, c.g,
                                          f"{path}.magnet"),
            condition_factors=factors,
        )

    linkage = base.linkage
    if "linkage" in section and section["linkage"] is not None:
        ldata = _mapping(section["linkage"], f"{path}.linkage")
        _check_keys(ldata, {"gamma", "screw_gear_ratio", "total_transform_ratio",
                            *_LINKAGE_LENGTHS}, f"{path}.linkage")
        lfields = {name: _quantity(ldata, name, "length", getattr(linkage, name),
                                   c.g, f"{path}.linkage")
                   for name in _LINKAGE_LENGTHS}
        lfields["gamma"] = _quantity(ldata, "gamma", "angle", linkage.gamma,
                                     c.g, f"{path}.linkage")
        lfields["screw_gear_ratio"] = _ratio(ldata, "screw_gear_ratio",
                                             linkage.screw_gear_ratio,
                                             f"{path}.linkage")
        lfields["total_transform_ratio"] = _ratio(ldata, "total_transform_ratio",
                                                  linkage.total_transform_ratio,
                                                  f"{path}.linkage")
        linkage = LinkageParams(**lfields)

    drive = base.drive
    if "drive" in section and section["drive"] is not None:
        drive = _build_motor(_mapping(section["drive"], f"{path}.drive"),
                             drive, c.g, f"{path}.drive")
    transform = base.transform
    if "transform" in section and section["transform"] is not None:
        transform = _build_motor(_mapping(section["transform"], f"{path}.transform"),
                                 transform, c.g, f"{path}.transform")

    return RobotSpec(**fields, magnet=magnet, linkage=linkage, drive=drive,
                     transform=transform)


def build_surface(section: dict, c: Constants) -> SurfaceSpec:
    path = "surface"
    _check_keys(section, {"inclination", "side", "mu", "condition",
                          "curvature_radius"}, path)
    if "inclination" not in section:
        raise ConfigError(f"{path}: missing required key inclination")
    inclination = _quantity(section, "inclination", "angle", math.nan, c.g, path)
    side_name = section.get("side", "top")
    try:
        side = Side(side_name)
    except ValueError as exc:
        raise ConfigError(f"{path}.side: expected 'top' or 'underneath', "
                          f"got {side_name!r}") from exc
    mu = _number(section, "mu", math.nan, path)
    if math.isnan(mu):
        raise ConfigError(f"{path}: missing required key mu")
    condition = build_condition(section.get("condition", "non_coated_flat"),
                                c.g, f"{path}.condition")
    radius = None
    raw_radius = section.get("curvature_radius")
    if raw_radius is not None and raw_radius != "flat":
        try:
            radius = parse_quantity(raw_radius, "length", c.g)
        except UnitError as exc:
            raise ConfigError(f"{path}.curvature_radius: {exc} "
                              f"(or the literal 'flat')") from exc
    return SurfaceSpec(inclination=inclination, side=side, mu=mu,
                       condition=condition, curvature_radius=radius)


def build_mission(section: dict, c: Constants) -> MissionScript:
    path = "mission"
    defaults = MissionScript(segments=())
    _check_keys(section, {"dt", "stop_interval", "pause_duration",
                          "stop_on_cliff", "cliff_lookahead", "imu_noise_sigma",
                          "alpha_rate_limit", "segments"}, path)
    raw_segments = section.get("segments")
    if not isinstance(raw_segments, list) or not raw_segments:
        raise ConfigError(f"{path}.segments: expected a non-empty list")
    segments = []
    for i, raw in enumerate(raw_segments):
        seg_path = f"{path}.segments[{i}]"
        data = _mapping(raw, seg_path)
        _check_keys(data, {"surface", "length", "speed_ref"}, seg_path)
        if "surface" not in data:
            raise ConfigError(f"{seg_path}: missing required key surface")
        surface = build_surface(_mapping(data["surface"], f"{seg_path}.surface"), c)
        length = _quantity(data, "length", "length", math.nan, c.g, seg_path)
        speed = _quantity(data, "speed_ref", "speed", math.nan, c.g, seg_path)
        if math.isnan(length) or math.isnan(speed):
            raise ConfigError(f"{seg_path}: needs both length and speed_ref")
        segments.append(MissionSegment(surface=surface, length=length,
                                       speed_ref=speed))

    stop_interval = None
    if section.get("stop_interval") is not None:
        stop_interval = _quantity(section, "stop_interval", "length",
                                  math.nan, c.g, path)
    stop_on_cliff = section.get("stop_on_cliff", defaults.stop_on_cliff)
    if not isinstance(stop_on_cliff, bool):
        raise ConfigError(f"{path}.stop_on_cliff: expected true/false")
    return MissionScript(
        segments=tuple(segments),
        dt=_quantity(section, "dt", "time", defaults.dt, c.g, path),
        stop_interval=stop_interval,
        pause_duration=_quantity(section, "pause_duration", "time",
                                 defaults.pause_duration, c.g, path),
        stop_on_cliff=stop_on_cliff,
        cliff_lookahead=_quantity(section, "cliff_lookahead", "length",
                                  defaults.cliff_lookahead, c.g, path),
        imu_noise_sigma=_quantity(section, "imu_noise_sigma", "angle",
                                  defaults.imu_noise_sigma, c.g, path),
        alpha_rate_limit=_number(section, "alpha_rate_limit",
                                 defaults.alpha_rate_limit, path),
    )


def load_robot_file(path: str | Path,
                    g_override: float | None = None) -> tuple[RobotSpec, Constants]:
    doc = load_yaml(path)
    check_schema_version(doc, str(path))
    _check_keys(doc, {"schema_version", "robot", "constants"}, str(path))
    c = read_constants(doc, g_override)
    robot = build_robot(_mapping(doc.get("robot", {}) or {}, "robot"), c)
    return robot, c


def load_surface_file(path: str | Path, c: Constants) -> SurfaceSpec:
    doc = load_yaml(path)
    check_schema_version(doc, str(path))
    _check_keys(doc, {"schema_version", "surface"}, str(path))
    if "surface" not in doc:
        raise ConfigError(f"{path}: missing required section surface")
    return build_surface(_mapping(doc["surface"], "surface"), c)


def load_mission_file(path: str | Path, c: Constants) -> MissionScript:
    doc = load_yaml(path)
    check_schema_version(doc, str(path))
    _check_keys(doc, {"schema_version", "mission"}, str(path))
    if "mission" not in doc:
        raise ConfigError(f"{path}: missing required section mission")
    return build_mission(_mapping(doc["mission"], "mission"), c)
