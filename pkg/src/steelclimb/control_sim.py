"""Discrete-time chain-speed control and mission simulation.

Each chain is a first-order lag toward its speed command, saturated at the
hardware's 0.35 m/s ceiling.  Independent PI(D) loops track the reference
and a cross-coupling term proportional to the speed difference keeps the
two chains synchronized.  Pose integrates on the developed (unrolled)
surface plane with exact constant-twist arcs; curvature affects only the
stability evaluation and the bending-mechanism target, never the planar
kinematics.

Determinism contract: every random effect comes from one
numpy.random.Generator seeded with PCG64(seed).  Each simulation step
draws exactly three standard normals, in order: IMU noise, left-chain
disturbance, right-chain disturbance (the speed-sync simulation draws the
chain pair only).  Draws happen whether or not the scaling sigmas are
zero, so the stream never depends on noise settings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import mechanism, stability
from .mechanism import KinematicDomainError
from .model import Constants, RobotSpec, SurfaceSpec

EVENT_SLIDING = "SlidingFailure"
EVENT_TURNOVER = "TurnoverFailure"
EVENT_CLIFF = "CliffDetected"
EVENT_DOMAIN = "DomainError"

TRACE_HEADER = ("t,x,y,heading,vL,vR,refL,refR,alpha,ticksL,ticksR,"
                "imu_phi,sonar,margin_slide,margin_turn,event")


@dataclass(frozen=True)
class PidGains:
    kp: float
    ki: float = 0.0
    kd: float = 0.0
    output_min: float = -math.inf
    output_max: float = math.inf
    integral_limit: float = math.inf  # bound on the accumulated error integral


# shipped speed-loop tuning; settles each 10/20/30 cm/s step well inside
# its hold period with no overshoot past the 2% band (see README)
DEFAULT_SPEED_GAINS = PidGains(kp=1.2, ki=2.0, kd=0.0,
                               output_min=0.0, output_max=0.35,
                               integral_limit=0.3)
DEFAULT_SYNC_GAIN = 0.5


class PidController:
    """Positional discrete PID with clamped integral and output.

    The derivative acts on the measurement, not the error, so reference
    steps do not kick the output.
    """

    def __init__(self, gains: PidGains):
        if not gains.output_min < gains.output_max:
            raise ValueError("output_min must be < output_max")
        if gains.integral_limit < 0:
            raise ValueError("integral_limit must be >= 0")
        self.gains = gains
        self.integral = 0.0
        self._prev_measurement: float | None = None

    def reset(self) -> None:
        self.integral = 0.0
        self._prev_measurement = None

    def step(self, error: float, measurement: float, dt: float) -> float:
        if dt <= 0:
            raise ValueError(f"dt must be > 0, got {dt}")
        g = self.gains
        limit = g.integral_limit
        self.integral = min(max(self.integral + error * dt, -limit), limit)
        derivative = 0.0
        if self._prev_measurement is not None:
            derivative = (measurement - self._prev_measurement) / dt
        self._prev_measurement = measurement
        out = g.kp * error + g.ki * self.integral - g.kd * derivative
        return min(max(out, g.output_min), g.output_max)


@dataclass(frozen=True)
class ChainPlant:
    """First-order speed lag with saturation and optional additive noise."""

    time_constant: float = 0.3  # s
    speed_max: float = 0.35  # m/s
    noise_sigma: float = 0.0  # m/s per step, scales a standard normal draw


def chain_plant_step(v: float, command: float, plant: ChainPlant, dt: float,
                     noise: float = 0.0) -> float:
    """Advance one chain speed by dt toward the command."""
    if dt <= 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    blend = 1.0 - math.exp(-dt / plant.time_constant)
    v_next = v + (command - v) * blend + noise
    return min(max(v_next, 0.0), plant.speed_max)


@dataclass(frozen=True)
class SpeedSample:
    t: float
    ref: float
    v_left: float
    v_right: float


def dual_chain_sync_sim(refs: list[float], duration_per_ref: float,
                        gains: PidGains = DEFAULT_SPEED_GAINS,
                        plant: ChainPlant = ChainPlant(),
                        dt: float = 0.1,
                        plant_right: ChainPlant | None = None,
                        sync_gain: float = DEFAULT_SYNC_GAIN,
                        seed: int = 0) -> list[SpeedSample]:
    """Track a staircase of speed references with both chains.

    ``plant_right`` lets the chains differ (worn track, motor spread); by
    default both use ``plant``.  Samples record the state entering each
    step, so sample k sits at t = k*dt.
    """
    if not refs:
        raise ValueError("need at least one reference speed")
    right = plant_right or plant
    rng = np.random.default_rng(seed)
    pid_left, pid_right = PidController(gains), PidController(gains)
    v_left = v_right = 0.0
    samples: list[SpeedSample] = []
    steps_per_ref = max(1, round(duration_per_ref / dt))
    t = 0.0
    for ref in refs:
        for _ in range(steps_per_ref):
            samples.append(SpeedSample(t, ref, v_left, v_right))
            sync = sync_gain * (v_left - v_right)
            cmd_left = pid_left.step(ref - v_left, v_left, dt) - sync
            cmd_right = pid_right.step(ref - v_right, v_right, dt) + sync
            z_left, z_right = rng.standard_normal(), rng.standard_normal()
            v_left = chain_plant_step(v_left, cmd_left, plant, dt,
                                      plant.noise_sigma * z_left)
            v_right = chain_plant_step(v_right, cmd_right, right, dt,
                                       right.noise_sigma * z_right)
            t += dt
    return samples


@dataclass(frozen=True)
class Pose:
    x: float = 0.0
    y: float = 0.0
    heading: float = 0.0


def pose_step(pose: Pose, v_left: float, v_right: float, track_width: float,
              dt: float) -> Pose:
    """Differential-drive dead reckoning, exact for constant speeds.

    Uses the closed-form circular arc when the twist is non-negligible and
    the straight-line limit otherwise.
    """
    if track_width <= 0:
        raise ValueError(f"track_width must be > 0, got {track_width}")
    v = 0.5 * (v_left + v_right)
    omega = (v_right - v_left) / track_width
    if abs(omega) <= 1e-9:
        return Pose(pose.x + v * math.cos(pose.heading) * dt,
                    pose.y + v * math.sin(pose.heading) * dt,
                    pose.heading)
    radius = v / omega
    heading = pose.heading + omega * dt
    return Pose(pose.x + radius * (math.sin(heading) - math.sin(pose.heading)),
                pose.y - radius * (math.cos(heading) - math.cos(pose.heading)),
                heading)


def transform_regulator_step(alpha: float, alpha_target: float,
                             rate_limit: float, dt: float) -> float:
    """Move the bending angle toward its target at a bounded rate."""
    if rate_limit <= 0:
        raise ValueError(f"rate_limit must be > 0, got {rate_limit}")
    step = min(max(alpha_target - alpha, -rate_limit * dt), rate_limit * dt)
    return alpha + step


@dataclass(frozen=True)
class MissionSegment:
    surface: SurfaceSpec
    length: float  # m along the developed plane
    speed_ref: float  # m/s


@dataclass(frozen=True)
class MissionScript:
    """A sequence of surfaces to traverse plus simulation settings."""

    segments: tuple[MissionSegment, ...]
    dt: float = 0.1
    stop_interval: float | None = None  # stop-and-capture cadence, m
    pause_duration: float = 0.5  # s per capture stop
    stop_on_cliff: bool = True
    cliff_lookahead: float = 0.05  # m of remaining surface that reads as a cliff
    imu_noise_sigma: float = math.radians(0.5)
    # transformation motor rated 0.15 s/60deg through the 26.5:1 train
    alpha_rate_limit: float = 0.25  # rad/s


def validate_mission(script: MissionScript, speed_max: float) -> list[str]:
    problems = []
    if script.dt <= 0:
        problems.append(f"dt must be > 0, got {script.dt}")
    if not script.segments:
        problems.append("mission needs at least one segment")
    for i, seg in enumerate(script.segments):
        if seg.length <= 0:
            problems.append(f"segments[{i}].length must be > 0, got {seg.length}")
        if not 0 < seg.speed_ref <= speed_max:
            problems.append(f"segments[{i}].speed_ref must be in (0, "
                            f"{speed_max}] m/s, got {seg.speed_ref}")
    if script.stop_interval is not None and script.stop_interval <= 0:
        problems.append("stop_interval must be > 0 when set")
    return problems


@dataclass(frozen=True)
class TraceRecord:
    t: float
    x: float
    y: float
    heading: float
    v_left: float
    v_right: float
    ref_left: float
    ref_right: float
    alpha: float
    ticks_left: int
    ticks_right: int
    imu_phi: float
    sonar: bool
    margin_slide: float
    margin_turn: float
    events: tuple[str, ...] = ()


@dataclass
class SimTrace:
    records: list[TraceRecord] = field(default_factory=list)
    terminal_event: str | None = None
    distance: float = 0.0

    @property
    def events(self) -> list[tuple[float, str]]:
        return [(r.t, e) for r in self.records for e in r.events]

    @property
    def failure_events(self) -> list[tuple[float, str]]:
        return [(t, e) for t, e in self.events
                if e in (EVENT_SLIDING, EVENT_TURNOVER, EVENT_DOMAIN)]

    @property
    def max_sync_error(self) -> float:
        if not self.records:
            return 0.0
        return max(abs(r.v_left - r.v_right) for r in self.records)


def trace_csv(trace: SimTrace) -> str:
    """Fixed-header CSV of a mission trace, full float precision."""
    lines = [TRACE_HEADER]
    for r in trace.records:
        lines.append(",".join([
            repr(r.t), repr(r.x), repr(r.y), repr(r.heading),
            repr(r.v_left), repr(r.v_right), repr(r.ref_left), repr(r.ref_right),
            repr(r.alpha), str(r.ticks_left), str(r.ticks_right),
            repr(r.imu_phi), str(int(r.sonar)),
            repr(r.margin_slide), repr(r.margin_turn),
            ";".join(r.events),
        ]))
    return "\n".join(lines) + "\n"


def _segment_alpha_target(segment: MissionSegment, spec: RobotSpec,
                          flat_alpha: float) -> tuple[float | None, bool]:
    """Bending target for a segment; (target, had_domain_error)."""
    radius = segment.surface.curvature_radius
    if radius is None:
        return flat_alpha, False
    try:
        return mechanism.alpha_from_radius(radius, spec.linkage), False
    except KinematicDomainError:
        return None, True


def run_mission(spec: RobotSpec, script: MissionScript, c: Constants,
                seed: int = 0,
                gains: PidGains = DEFAULT_SPEED_GAINS,
                plant: ChainPlant = ChainPlant(),
                sync_gain: float = DEFAULT_SYNC_GAIN,
                rule: stability.BoundRule = stability.BoundRule.ANALYTIC,
                ) -> SimTrace:
    """Step a robot through a mission script; deterministic for a seed.

    Records snapshot the state at each t = k*dt before the control update.
    Failure verdicts terminate the run after their record is emitted;
    a cliff detection terminates it when the script says to stop.
    """
    problems = validate_mission(script, plant.speed_max)
    if problems:
        raise ValueError("; ".join(problems))

    rng = np.random.default_rng(seed)
    dt = script.dt
    bounds: list[float] = []
    total = 0.0
    for seg in script.segments:
        total += seg.length
        bounds.append(total)

    reports = [stability.assess(spec, seg.surface, c, rule=rule)
               for seg in script.segments]
    flat_alpha = mechanism.alpha_branch(spec.linkage)[0]
    targets = [_segment_alpha_target(seg, spec, flat_alpha)
               for seg in script.segments]

    pid_left, pid_right = PidController(gains), PidController(gains)
    pose = Pose()
    v_left = v_right = 0.0
    s = 0.0  # arc length along the mission
    dist_left = dist_right = 0.0
    ticks_left_total = ticks_right_total = 0
    alpha = flat_alpha
    seg_index = 0
    domain_error_pending = False
    next_stop = script.stop_interval if script.stop_interval else math.inf
    pause_steps_left = 0
    cliff_seen = False
    trace = SimTrace()

    # generous cap: triple the ideal traversal time plus every capture stop
    ideal_steps = sum(seg.length / seg.speed_ref for seg in script.segments) / dt
    pause_steps = 0
    if script.stop_interval:
        pause_steps = (int(total / script.stop_interval) + 1) * \
            (int(script.pause_duration / dt) + 1)
    max_steps = int(3 * ideal_steps) + pause_steps + 200

    for k in range(max_steps):
        if s >= total:
            break
        t = k * dt
        while seg_index < len(bounds) - 1 and s >= bounds[seg_index]:
            seg_index += 1
            domain_error_pending = False
        segment = script.segments[seg_index]
        target, target_invalid = targets[seg_index]
        if target_invalid and not domain_error_pending:
            domain_error_pending = True
            emit_domain_error = True
        else:
            emit_domain_error = False

        # fixed draw order keeps traces reproducible regardless of sigmas
        z_imu = rng.standard_normal()
        z_left = rng.standard_normal()
        z_right = rng.standard_normal()

        imu_phi = segment.surface.inclination + script.imu_noise_sigma * z_imu
        remaining = total - s
        sonar = remaining > script.cliff_lookahead
        report = reports[seg_index]

        events: list[str] = []
        if not report.verdicts["sliding"]:
            events.append(EVENT_SLIDING)
        if not report.verdicts["turnover"]:
            events.append(EVENT_TURNOVER)
        if not sonar and not cliff_seen:
            cliff_seen = True
            events.append(EVENT_CLIFF)
        if emit_domain_error:
            events.append(EVENT_DOMAIN)

        paused = pause_steps_left > 0
        if not paused and s >= next_stop:
            paused = True
            pause_steps_left = max(1, round(script.pause_duration / dt))
            next_stop += script.stop_interval
        ref = 0.0 if paused else segment.speed_ref

        new_ticks_left = math.floor(dist_left / spec.block_pitch)
        new_ticks_right = math.floor(dist_right / spec.block_pitch)
        trace.records.append(TraceRecord(
            t=t, x=pose.x, y=pose.y, heading=pose.heading,
            v_left=v_left, v_right=v_right, ref_left=ref, ref_right=ref,
            alpha=alpha,
            ticks_left=new_ticks_left - ticks_left_total,
            ticks_right=new_ticks_right - ticks_right_total,
            imu_phi=imu_phi, sonar=sonar,
            margin_slide=report.margins["sliding"],
            margin_turn=report.margins["turnover"],
            events=tuple(events),
        ))
        ticks_left_total, ticks_right_total = new_ticks_left, new_ticks_right

        if EVENT_SLIDING in events or EVENT_TURNOVER in events:
            trace.terminal_event = (EVENT_SLIDING if EVENT_SLIDING in events
                                    else EVENT_TURNOVER)
            break
        if EVENT_CLIFF in events and script.stop_on_cliff:
            trace.terminal_event = EVENT_CLIFF
            break

        if paused:
            pause_steps_left -= 1

        sync = sync_gain * (v_left - v_right)
        cmd_left = pid_left.step(ref - v_left, v_left, dt) - sync
        cmd_right = pid_right.step(ref - v_right, v_right, dt) + sync
        v_left = chain_plant_step(v_left, cmd_left, plant, dt,
                                  plant.noise_sigma * z_left)
        v_right = chain_plant_step(v_right, cmd_right, plant, dt,
                                   plant.noise_sigma * z_right)
        pose = pose_step(pose, v_left, v_right, spec.track_width, dt)
        dist_left += v_left * dt
        dist_right += v_right * dt
        s += 0.5 * (v_left + v_right) * dt
        if target is not None:
            alpha = transform_regulator_step(alpha, target,
                                             script.alpha_rate_limit, dt)

    trace.distance = s
    return trace
