"""Magnetic adhesion model and pull-test data handling.

Per-block force is the data-sheet nominal scaled by a surface-condition
factor; totals multiply by the contacting block count.  Pull tests invert
a hanging-scale measurement: the scale carries weight plus adhesion, so
F = g*M - P.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

from .model import (ConditionKind, Constants, MagnetSpec, RobotSpec,
                    SurfaceCondition, SurfaceSpec, weight)


@dataclass(frozen=True)
class AdhesionResult:
    per_block: float  # N
    contacting_blocks: int
    total: float  # N


def condition_factor(magnet: MagnetSpec, condition: SurfaceCondition) -> float:
    """Derating factor for a surface condition, in (0, 1].

    Curved conditions interpolate the diameter table linearly on
    |diameter| and clamp beyond its ends.
    """
    factors = magnet.condition_factors
    if condition.kind is ConditionKind.NON_COATED_FLAT:
        return factors.non_coated_flat
    if condition.kind is ConditionKind.COATED_FLAT:
        return factors.coated_flat
    table = sorted(factors.curved)
    if not table:
        return factors.coated_flat
    d = abs(condition.diameter or 0.0)
    if d <= table[0][0]:
        return table[0][1]
    if d >= table[-1][0]:
        return table[-1][1]
    for (d0, f0), (d1, f1) in zip(table, table[1:]):
        if d0 <= d <= d1:
            t = (d - d0) / (d1 - d0)
            return f0 + t * (f1 - f0)
    return table[-1][1]  # unreachable


def block_force(magnet: MagnetSpec, surface: SurfaceSpec) -> float:
    """Holding force of one contacting block on the given surface, N."""
    return magnet.block_force_nominal * condition_factor(magnet, surface.condition)


def total_adhesion(spec: RobotSpec, surface: SurfaceSpec) -> AdhesionResult:
    """Total adhesion: per-block force times contacting blocks on all chains."""
    per = block_force(spec.magnet, surface)
    count = spec.contact_blocks_per_chain * spec.chain_count
    return AdhesionResult(per_block=per, contacting_blocks=count,
                          total=per * spec.contact_blocks_per_chain * spec.chain_count)


def pull_test_to_force(scale_kg: float, robot_weight: float, c: Constants) -> float:
    """Adhesion force from a hanging-scale reading at lift-off: g*M - P."""
    pull = c.g * scale_kg
    if pull < robot_weight:
        raise ValueError(
            f"scale reading {scale_kg} kg carries less than the robot weight "
            f"({pull:.6g} N < {robot_weight:.6g} N); the robot never lifted")
    return pull - robot_weight


@dataclass(frozen=True)
class PullTestSample:
    scale_reading: float  # kg
    surface: SurfaceCondition
    measured_force: float  # N


class PullTestDataError(ValueError):
    """Pull-test CSV rows that could not be used, with row numbers."""


_CONDITION_NAMES = {k.value: k for k in ConditionKind}


def parse_pull_test_csv(text: str, spec: RobotSpec, c: Constants) -> list[PullTestSample]:
    """Parse `surface,diameter_mm,scale_kg` rows into force samples.

    diameter_mm may be signed (negative = concave) and empty for flat
    conditions.  All bad rows are reported together, 1-based, counting the
    header as row 1.
    """
    reader = csv.DictReader(io.StringIO(text))
    expected = ["surface", "diameter_mm", "scale_kg"]
    if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != expected:
        raise PullTestDataError(
            f"expected header {','.join(expected)!r}, got {reader.fieldnames}")
    p = weight(spec, c)
    samples: list[PullTestSample] = []
    errors: list[str] = []
    for i, row in enumerate(reader, start=2):
        kind_name = (row.get("surface") or "").strip()
        kind = _CONDITION_NAMES.get(kind_name)
        if kind is None:
            errors.append(f"row {i}: unknown surface {kind_name!r}")
            continue
        diameter_text = (row.get("diameter_mm") or "").strip()
        diameter = None
        if kind is ConditionKind.COATED_CURVED:
            try:
                diameter = float(diameter_text) * 1e-3
            except ValueError:
                errors.append(f"row {i}: curved surface needs a numeric "
                              f"diameter_mm, got {diameter_text!r}")
                continue
        try:
            scale = float((row.get("scale_kg") or "").strip())
        except ValueError:
            errors.append(f"row {i}: bad scale_kg {row.get('scale_kg')!r}")
            continue
        try:
            force = pull_test_to_force(scale, p, c)
        except ValueError as exc:
            errors.append(f"row {i}: {exc}")
            continue
        samples.append(PullTestSample(scale, SurfaceCondition(kind, diameter), force))
    if errors:
        raise PullTestDataError("; ".join(errors))
    if not samples:
        raise PullTestDataError("no rows")
    return samples


@dataclass(frozen=True)
class PullTestReport:
    """Measured adhesion against the per-block design requirement.

    Two comparisons are carried side by side and neither depends on the
    report's display units: ``required_total`` is the strict SI bound
    (n * per-block requirement, newtons), while ``required_published`` is
    the same bound run through the mass-based gravitational-unit chain
    (numerically required_total / g), which is how the original design
    sheet tabulated it.
    """

    samples: tuple[PullTestSample, ...]
    min_force: float
    mean_force: float
    per_block_required: float
    required_total: float
    required_published: float
    passes_si: bool
    passes_published: bool

    @property
    def verdict(self) -> str:
        return "adheres well" if self.passes_published else "insufficient adhesion"


def evaluate_pull_tests(samples: list[PullTestSample], spec: RobotSpec,
                        c: Constants, per_block_required: float) -> PullTestReport:
    """Summarise samples and compare against n * per-block requirement."""
    if not samples:
        raise PullTestDataError("no rows")
    forces = [s.measured_force for s in samples]
    n = spec.contact_blocks_per_chain * spec.chain_count
    required_total = per_block_required * n
    required_published = required_total / c.g
    min_force = min(forces)
    return PullTestReport(
        samples=tuple(samples),
        min_force=min_force,
        mean_force=math.fsum(forces) / len(forces),
        per_block_required=per_block_required,
        required_total=required_total,
        required_published=required_published,
        passes_si=min_force > required_total,
        passes_published=min_force > required_published,
    )
