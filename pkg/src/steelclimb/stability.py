"""Static failure criteria and motor sizing.

Every check compares an available force or torque against a requirement
and reports a signed margin (available/required - 1); a criterion passes
only when its margin is strictly positive.

Sliding: on the top of an incline friction must carry P*sin(phi) with the
normal force assisted by gravity, so the adhesion requirement is
P*sin(phi)/mu - P*cos(phi) (clamped at zero: a shallow top surface holds
the robot by itself).  Climbing underneath, gravity subtracts from the
normal force and the requirement becomes P*sin(phi)/mu + P*cos(phi).

Tip-over: the robot peels about the leading contact line; balancing the
weight moment across the contact span l with the lead blocks of both
chains gives a per-block requirement of P*h/(2l).

Worst-case sliding over all inclinations is reported two ways: the
interval-endpoint evaluation P*max(1, 1/mu) that a quick design check
uses, and the true interior maximum P*sqrt(1 + 1/mu^2) at
tan(phi) = 1/mu.  The analytic bound is never smaller; verdicts use it by
default.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .adhesion import AdhesionResult, block_force, total_adhesion
from .model import Constants, MotorSpec, RobotSpec, Side, SurfaceSpec, weight

DEFAULT_MU_MIN = 0.4
DEFAULT_MU_MAX = 0.8
# friction constant of the block-release fulcrum; defaults to the top of
# the chain-on-steel friction band and is configurable per run
DEFAULT_RELEASE_FRICTION = 0.78
DEFAULT_EFFICIENCY = 0.8

CRITERIA = ("sliding", "turnover", "per_block", "drive_torque", "transform_torque")


class BoundRule(str, Enum):
    """Which worst-case sliding bound feeds the per-block requirement."""

    ANALYTIC = "analytic"
    ENDPOINT = "endpoint"


def sliding_required(p_weight: float, phi: float, mu: float, side: Side) -> float:
    """Adhesion needed to prevent sliding at inclination phi, newtons."""
    if not 0 < phi <= math.pi / 2:
        raise ValueError(f"inclination must be in (0, pi/2] rad, got {phi}")
    if mu <= 0:
        raise ValueError(f"friction coefficient must be > 0, got {mu}")
    pulled = p_weight * math.sin(phi) / mu
    held = p_weight * math.cos(phi)
    if side is Side.UNDERNEATH:
        return pulled + held
    return max(pulled - held, 0.0)


@dataclass(frozen=True)
class SlidingWorstCase:
    endpoint_bound: float  # N, from evaluating the phi interval endpoints
    analytic_bound: float  # N, true maximum over phi
    argmax_phi: float  # rad, where the analytic maximum occurs


def sliding_worst_case(p_weight: float, mu_min: float) -> SlidingWorstCase:
    """Worst-case underneath-sliding requirement over all inclinations."""
    if mu_min <= 0:
        raise ValueError(f"mu_min must be > 0, got {mu_min}")
    return SlidingWorstCase(
        endpoint_bound=p_weight * max(1.0, 1.0 / mu_min),
        analytic_bound=p_weight * math.sqrt(1.0 + 1.0 / mu_min ** 2),
        argmax_phi=math.atan(1.0 / mu_min),
    )


def turnover_required_per_block(p_weight: float, h: float, l: float) -> float:
    """Per-block adhesion to keep the weight moment from peeling the robot."""
    if h < 0 or l <= 0:
        raise ValueError(f"need h >= 0 and l > 0, got h={h}, l={l}")
    return p_weight * h / (2.0 * l)


def per_block_required(spec: RobotSpec, c: Constants,
                       mu_min: float = DEFAULT_MU_MIN,
                       rule: BoundRule = BoundRule.ANALYTIC) -> float:
    """Per-block force covering both sliding (shared) and tip-over, newtons.

    The tip-over term uses the full robot height as its lever arm, the
    conservative choice for a chassis that can stand proud of its centre
    of mass.
    """
    n = spec.chain_count * spec.contact_blocks_per_chain
    if n < 1:
        raise ValueError("need at least one contacting block")
    p = weight(spec, c)
    worst = sliding_worst_case(p, mu_min)
    slide_bound = (worst.analytic_bound if rule is BoundRule.ANALYTIC
                   else worst.endpoint_bound)
    return max(slide_bound / n,
               turnover_required_per_block(p, spec.total_height, spec.contact_span))


def drive_torque_required(spec: RobotSpec, surface: SurfaceSpec, c: Constants) -> float:
    """Torque to start the chains moving on a surface, N.m (output side).

    Half the weight component loads each chain over the full-height lever
    arm, and the last contacting block's adhesion must be pried over the
    rotation fulcrum at the release arm.
    """
    p = weight(spec, c)
    lever = spec.total_height * p * math.sin(surface.inclination) / 2.0
    release = block_force(spec.magnet, surface) * spec.moment_arm
    return lever + release


def drive_torque_available(drive: MotorSpec) -> float:
    """Combined output torque of the drive motors at stall, N.m."""
    return drive.stall_torque * drive.gear_ratio * drive.count


def transform_torque_required(spec: RobotSpec, c: Constants,
                              k: float = DEFAULT_RELEASE_FRICTION,
                              efficiency: float = DEFAULT_EFFICIENCY) -> float:
    """Motor-shaft torque to work the bending mechanism, N.m.

    Sized at the strongest-friction case: the blocks press with weight
    plus full nominal adhesion, the release lever e carries e*k*N, and the
    screw train divides the load by its total ratio at the given
    efficiency.
    """
    if not 0 < efficiency <= 1:
        raise ValueError(f"efficiency must be in (0, 1], got {efficiency}")
    if k < 0:
        raise ValueError(f"friction constant must be >= 0, got {k}")
    n = spec.chain_count * spec.contact_blocks_per_chain
    normal = weight(spec, c) + n * spec.magnet.block_force_nominal
    load = spec.linkage.e * k * normal
    return load / (spec.linkage.total_transform_ratio * efficiency)


def transform_torque_available(transform: MotorSpec) -> float:
    return transform.stall_torque * transform.gear_ratio * transform.count


@dataclass(frozen=True)
class StabilityReport:
    """All requirements, availabilities, margins and verdicts for one surface."""

    sliding_required: float
    turnover_required_per_block: float
    per_block_required: float
    adhesion_available: AdhesionResult
    drive_torque_required: float
    drive_torque_available: float
    transform_torque_required: float
    transform_torque_available: float
    margins: dict[str, float]
    verdicts: dict[str, bool]

    @property
    def all_pass(self) -> bool:
        return all(self.verdicts.values())


def _margin(available: float, required: float) -> float:
    if required <= 0:
        return math.inf
    return available / required - 1.0


def assess(spec: RobotSpec, surface: SurfaceSpec, c: Constants,
           mu_min: float | None = None,
           rule: BoundRule = BoundRule.ANALYTIC,
           k: float = DEFAULT_RELEASE_FRICTION,
           efficiency: float = DEFAULT_EFFICIENCY) -> StabilityReport:
    """Evaluate every criterion for a robot on one surface.

    ``mu_min`` feeds the design-level per-block bound and defaults to the
    surface's own friction coefficient.
    """
    p = weight(spec, c)
    adhesion = total_adhesion(spec, surface)
    slide_req = sliding_required(p, surface.inclination, surface.mu, surface.side)
    turn_req = turnover_required_per_block(p, spec.total_height, spec.contact_span)
    block_req = per_block_required(spec, c, mu_min=surface.mu if mu_min is None
                                   else mu_min, rule=rule)
    drive_req = drive_torque_required(spec, surface, c)
    drive_avail = drive_torque_available(spec.drive)
    trans_req = transform_torque_required(spec, c, k=k, efficiency=efficiency)
    trans_avail = transform_torque_available(spec.transform)

    margins = {
        "sliding": _margin(adhesion.total, slide_req),
        "turnover": _margin(adhesion.per_block, turn_req),
        "per_block": _margin(adhesion.per_block, block_req),
        "drive_torque": _margin(drive_avail, drive_req),
        "transform_torque": _margin(trans_avail, trans_req),
    }
    verdicts = {name: margin > 0 for name, margin in margins.items()}
    return StabilityReport(
        sliding_required=slide_req,
        turnover_required_per_block=turn_req,
        per_block_required=block_req,
        adhesion_available=adhesion,
        drive_torque_required=drive_req,
        drive_torque_available=drive_avail,
        transform_torque_required=trans_req,
        transform_torque_available=trans_avail,
        margins=margins,
        verdicts=verdicts,
    )


@dataclass(frozen=True)
class EnvelopeRow:
    phi_deg: float
    mu: float
    side: Side
    required: float | None
    available: float
    margin: float | None
    passed: bool | None  # None marks a row whose point left the domain


def envelope(spec: RobotSpec, c: Constants,
             phi_range_deg: tuple[float, float],
             mu_range: tuple[float, float],
             steps: int,
             condition=None) -> list[EnvelopeRow]:
    """Sliding-requirement sweep over an (inclination, friction) grid.

    Emits steps^2 grid points x 2 sides, sorted by (phi, mu, side); rows
    at out-of-domain points are annotated rather than dropped.
    """
    if steps < 2:
        raise ValueError(f"steps must be >= 2, got {steps}")
    from .model import SurfaceCondition
    cond = condition or SurfaceCondition.non_coated_flat()
    surface_like = SurfaceSpec(inclination=math.pi / 2, side=Side.TOP,
                               mu=1.0, condition=cond)
    available = total_adhesion(spec, surface_like).total
    p = weight(spec, c)

    phis = [phi_range_deg[0] + (phi_range_deg[1] - phi_range_deg[0]) * i / (steps - 1)
            for i in range(steps)]
    mus = [mu_range[0] + (mu_range[1] - mu_range[0]) * j / (steps - 1)
           for j in range(steps)]
    rows: list[EnvelopeRow] = []
    for phi_deg in phis:
        for mu in mus:
            for side in (Side.TOP, Side.UNDERNEATH):
                try:
                    req = sliding_required(p, math.radians(phi_deg), mu, side)
                except ValueError:
                    rows.append(EnvelopeRow(phi_deg, mu, side, None,
                                            available, None, None))
                    continue
                margin = _margin(available, req)
                rows.append(EnvelopeRow(phi_deg, mu, side, req, available,
                                        margin, margin > 0))
    rows.sort(key=lambda r: (r.phi_deg, r.mu, r.side.value))
    return rows


def envelope_csv(rows: list[EnvelopeRow]) -> str:
    lines = ["phi_deg,mu,side,required_N,available_N,margin,pass"]
    for r in rows:
        if r.passed is None:
            lines.append(f"{r.phi_deg!r},{r.mu!r},{r.side.value},,"
                         f"{r.available!r},,error")
        else:
            lines.append(f"{r.phi_deg!r},{r.mu!r},{r.side.value},{r.required!r},"
                         f"{r.available!r},{r.margin!r},{int(r.passed)}")
    return "\n".join(lines) + "\n"
