"""Kinematics of the chassis-bending mechanism.

A feed screw drives a crank/slider that flexes the chain bed so the robot
conforms to a cylinder of radius x.  The chain maps:

    screw travel  <->  slider extension y  <->  crank angle alpha  <->  x

The slider relation is y = sqrt(crank_len^2 - (b1 - a*cos(alpha-gamma))^2),
monotone decreasing on the branch alpha in [gamma, alpha_max] where
alpha_max satisfies cos(alpha_max - gamma) = (b1 - crank_len)/a.  Inverses
are solved by bracketed bisection on that branch; near the radicand-zero
boundary the derivative blows up, which rules out Newton steps.

The contact-radius relation exists in two forms.  The geometric
derivation reduces to

    x = (b - f*cos(alpha)) / sin(alpha) - e

while the typeset equation it came from carries b instead of f in its
second term.  The two disagree by (b - f)/(cos*sin); the derivation form
is the default and the printed form is kept behind a flag for
cross-checking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .model import LinkageParams

# bisection tolerance for angle solves, radians
_ALPHA_TOL = 1e-10
# radicand this far below zero still counts as the boundary (absolute, m^2)
_RADICAND_SLACK = 1e-12

DEFAULT_FLAT_THRESHOLD = 10.0  # |x| beyond this reports a flat surface


class RadiusVariant(str, Enum):
    DERIVATION = "derivation"
    PRINTED = "printed"


class KinematicDomainError(ValueError):
    """An input left the admissible domain of one mapping stage."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"{stage}: {message}")
        self.stage = stage


def radius_from_alpha(alpha: float, p: LinkageParams,
                      variant: RadiusVariant = RadiusVariant.DERIVATION) -> float:
    """Contact radius x for crank angle alpha in (0, pi/2), signed metres."""
    if not 0 < alpha < math.pi / 2:
        raise KinematicDomainError(
            "radius_from_alpha",
            f"alpha must be in (0, pi/2) rad, got {alpha}")
    sin_a, cos_a = math.sin(alpha), math.cos(alpha)
    if variant is RadiusVariant.DERIVATION:
        return (p.b - p.f * cos_a) / sin_a - p.e
    # printed form: b replaces f in the second term (beta = pi/2 - alpha)
    return p.b / sin_a - p.b / (cos_a * sin_a) - p.e + p.f * math.tan(alpha)


def crank_angle_limit(p: LinkageParams) -> float:
    """Largest |alpha - gamma| with a real slider position."""
    return math.acos((p.b1 - p.crank_len) / p.a)


def alpha_branch(p: LinkageParams) -> tuple[float, float]:
    """The monotone working branch [gamma, alpha_max] of the slider map."""
    return p.gamma, p.gamma + crank_angle_limit(p)


def slider_from_alpha(alpha: float, p: LinkageParams) -> float:
    """Slider extension y (m) at crank angle alpha."""
    offset = p.b1 - p.a * math.cos(alpha - p.gamma)
    radicand = p.crank_len ** 2 - offset ** 2
    if radicand < -_RADICAND_SLACK:
        lo = p.gamma - crank_angle_limit(p)
        hi = p.gamma + crank_angle_limit(p)
        raise KinematicDomainError(
            "slider_from_alpha",
            f"no real slider position at alpha={alpha:.6f} rad; admissible "
            f"alpha interval is [{lo:.6f}, {hi:.6f}] rad")
    return math.sqrt(max(radicand, 0.0))


def slider_max(p: LinkageParams) -> float:
    """Slider extension at the start of the working branch (alpha = gamma)."""
    return slider_from_alpha(p.gamma, p)


def _bisect_decreasing(fn, lo: float, hi: float, target: float) -> float:
    """Root of fn(x) = target for fn monotone decreasing on [lo, hi]."""
    while hi - lo > _ALPHA_TOL:
        mid = 0.5 * (lo + hi)
        if fn(mid) > target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def alpha_from_slider(y: float, p: LinkageParams) -> float:
    """Crank angle on the working branch with slider extension y.

    Bracketed bisection to 1e-10 rad; rejects y without a preimage.
    """
    lo, hi = alpha_branch(p)
    y_max = slider_from_alpha(lo, p)
    if not 0 <= y <= y_max:
        raise KinematicDomainError(
            "alpha_from_slider",
            f"slider extension {y} m outside the branch range [0, {y_max:.6f}] m")
    if y == y_max:
        return lo
    if y == 0:
        return hi
    return _bisect_decreasing(lambda a: slider_from_alpha(a, p), lo, hi, y)


def motor_revs_to_travel(revolutions: float, p: LinkageParams) -> float:
    """Screw travel produced by transformation-motor revolutions."""
    return revolutions * p.screw_pitch / p.screw_gear_ratio


def travel_to_slider(travel: float, p: LinkageParams) -> float:
    """Slider extension for a feed-screw travel from the home position.

    Home (travel 0) is the fully extended slider at alpha = gamma; the
    screw nut carries the slider directly, so displacement equals travel.
    """
    if not 0 <= travel <= p.feed_travel_max:
        raise KinematicDomainError(
            "travel_to_slider",
            f"travel {travel} m outside [0, {p.feed_travel_max}] m")
    return slider_max(p) - travel


def slider_to_travel(y: float, p: LinkageParams) -> float:
    """Inverse of :func:`travel_to_slider`; exact linear round trip."""
    travel = slider_max(p) - y
    if not 0 <= travel <= p.feed_travel_max:
        raise KinematicDomainError(
            "slider_to_travel",
            f"slider extension {y} m maps to travel {travel} m outside "
            f"[0, {p.feed_travel_max}] m")
    return travel


def radius_from_travel(travel: float, p: LinkageParams,
                       variant: RadiusVariant = RadiusVariant.DERIVATION,
                       flat_threshold: float = DEFAULT_FLAT_THRESHOLD,
                       ) -> float | None:
    """Contact radius for a screw travel; None means flat (|x| beyond cutoff).

    Composes travel -> slider -> alpha -> radius; domain errors keep the
    name of the stage that rejected the input.
    """
    y = travel_to_slider(travel, p)
    alpha = alpha_from_slider(y, p)
    x = radius_from_alpha(alpha, p, variant)
    if abs(x) > flat_threshold:
        return None
    return x


@dataclass(frozen=True)
class MechanismState:
    """One configuration of the bending mechanism (angles rad, lengths m)."""

    alpha: float
    beta: float
    phi_crank: float
    slider_y: float
    screw_travel: float
    contact_radius: float | None  # None = flat


def state_from_travel(travel: float, p: LinkageParams,
                      variant: RadiusVariant = RadiusVariant.DERIVATION,
                      flat_threshold: float = DEFAULT_FLAT_THRESHOLD,
                      ) -> MechanismState:
    y = travel_to_slider(travel, p)
    alpha = alpha_from_slider(y, p)
    x = radius_from_alpha(alpha, p, variant)
    return MechanismState(
        alpha=alpha,
        beta=math.pi / 2 - alpha,
        phi_crank=alpha - p.gamma,
        slider_y=y,
        screw_travel=travel,
        contact_radius=None if abs(x) > flat_threshold else x,
    )


def alpha_from_radius(radius: float, p: LinkageParams,
                      variant: RadiusVariant = RadiusVariant.DERIVATION) -> float:
    """Crank angle on the working branch that yields the given contact radius.

    The radius map is strictly decreasing there (its stationary point at
    cos(alpha) = f/b lies above alpha_max for sane links), so bisection
    applies directly.
    """
    lo, hi = alpha_branch(p)
    x_lo = radius_from_alpha(lo, p, variant)
    x_hi = radius_from_alpha(hi, p, variant)
    if not x_hi <= radius <= x_lo:
        raise KinematicDomainError(
            "alpha_from_radius",
            f"radius {radius} m outside achievable range "
            f"[{x_hi:.6f}, {x_lo:.6f}] m")
    return _bisect_decreasing(lambda a: radius_from_alpha(a, p, variant),
                              lo, hi, radius)


def slider_ratio_deg_per_mm(alpha: float, p: LinkageParams) -> float:
    """Local |d(alpha)/dy| in degrees per millimetre of slider motion.

    Diagnostic only: the mapping is nonlinear, so the single linearised
    ratio sometimes quoted for mechanisms like this holds only pointwise.
    """
    y = slider_from_alpha(alpha, p)
    if y == 0:
        return math.inf
    phi = alpha - p.gamma
    dyda = -(p.b1 - p.a * math.cos(phi)) * p.a * math.sin(phi) / y
    if dyda == 0:
        return math.inf
    return abs(math.degrees(1.0 / dyda)) * 1e-3


@dataclass(frozen=True)
class TravelTableRow:
    travel: float
    slider: float
    in_domain: bool
    alpha: float | None = None
    radius: float | None = None  # None with in_domain=True means flat


def travel_radius_table(p: LinkageParams, steps: int,
                        variant: RadiusVariant = RadiusVariant.DERIVATION,
                        flat_threshold: float = DEFAULT_FLAT_THRESHOLD,
                        ) -> list[TravelTableRow]:
    """Evenly spaced sweep of travel over [0, feed_travel_max].

    Rows whose travel leaves the kinematic domain are marked, not dropped,
    so the emitted table always has exactly ``steps`` rows.
    """
    if steps < 2:
        raise ValueError(f"steps must be >= 2, got {steps}")
    rows: list[TravelTableRow] = []
    for i in range(steps):
        travel = p.feed_travel_max * i / (steps - 1)
        slider = slider_max(p) - travel
        try:
            alpha = alpha_from_slider(slider, p)
            x = radius_from_alpha(alpha, p, variant)
        except KinematicDomainError:
            rows.append(TravelTableRow(travel, slider, in_domain=False))
            continue
        rows.append(TravelTableRow(
            travel, slider, in_domain=True, alpha=alpha,
            radius=None if abs(x) > flat_threshold else x))
    return rows


def travel_table_csv(rows: list[TravelTableRow]) -> str:
    """Render a travel sweep as CSV (full float precision)."""
    lines = ["travel_m,alpha_rad,slider_m,radius_m,in_domain"]
    for row in rows:
        alpha = "" if row.alpha is None else repr(row.alpha)
        if not row.in_domain:
            radius = ""
        elif row.radius is None:
            radius = "flat"
        else:
            radius = repr(row.radius)
        lines.append(f"{row.travel!r},{alpha},{row.slider!r},{radius},"
                     f"{int(row.in_domain)}")
    return "\n".join(lines) + "\n"
