"""Plain-text report rendering.

Reports print with 6 significant digits; CSV emitters elsewhere keep full
float precision.  The gravitational-units mode ("kgf") re-expresses forces
as kgf and torques as kgf.cm using the run's g; it changes presentation
only, never a verdict.
"""

from __future__ import annotations

import math

from .adhesion import PullTestReport
from .model import Constants, SurfaceSpec
from .stability import StabilityReport
from .units import fmt_sig, newton_meters_to_kgfcm, newtons_to_kgf

SI_MODE = "si"
KGF_MODE = "kgf"


def _force(value: float, mode: str, g: float) -> str:
    if mode == KGF_MODE:
        return f"{fmt_sig(newtons_to_kgf(value, g))} kgf"
    return f"{fmt_sig(value)} N"


def _torque(value: float, mode: str, g: float) -> str:
    if mode == KGF_MODE:
        return f"{fmt_sig(newton_meters_to_kgfcm(value, g))} kgf.cm"
    return f"{fmt_sig(value)} N.m"


def _verdict(passed: bool) -> str:
    return "pass" if passed else "FAIL"


def _margin(value: float) -> str:
    if math.isinf(value):
        return "inf"
    return f"{value:+.3f}"


def render_stability(report: StabilityReport, surface: SurfaceSpec,
                     c: Constants, mode: str = SI_MODE) -> str:
    """Aligned criterion table for one surface."""
    rows = [
        ("sliding", _force(report.sliding_required, mode, c.g),
         _force(report.adhesion_available.total, mode, c.g)),
        ("turnover (per block)", _force(report.turnover_required_per_block, mode, c.g),
         _force(report.adhesion_available.per_block, mode, c.g)),
        ("per-block combined", _force(report.per_block_required, mode, c.g),
         _force(report.adhesion_available.per_block, mode, c.g)),
        ("drive torque", _torque(report.drive_torque_required, mode, c.g),
         _torque(report.drive_torque_available, mode, c.g)),
        ("transform torque", _torque(report.transform_torque_required, mode, c.g),
         _torque(report.transform_torque_available, mode, c.g)),
    ]
    keys = ("sliding", "turnover", "per_block", "drive_torque", "transform_torque")
    lines = [
        f"surface: {math.degrees(surface.inclination):.6g} deg "
        f"{surface.side.value}, mu={surface.mu:.6g}, "
        f"condition={surface.condition.kind.value}",
        f"{'criterion':<22}{'required':>16}{'available':>16}"
        f"{'margin':>10}  verdict",
    ]
    for (label, required, available), key in zip(rows, keys):
        lines.append(f"{label:<22}{required:>16}{available:>16}"
                     f"{_margin(report.margins[key]):>10}  "
                     f"{_verdict(report.verdicts[key])}")
    lines.append(f"overall: {_verdict(report.all_pass)}")
    return "\n".join(lines)


def render_pull_tests(report: PullTestReport, c: Constants,
                      mode: str = SI_MODE) -> str:
    """Pull-test summary with both the strict and the published comparison."""
    lines = [f"{'surface':<18}{'diameter':>12}{'scale':>10}{'force':>14}"]
    for s in report.samples:
        diameter = ("-" if s.surface.diameter is None
                    else f"{s.surface.diameter * 1e3:.6g} mm")
        lines.append(f"{s.surface.kind.value:<18}{diameter:>12}"
                     f"{s.scale_reading:>8.6g} kg"
                     f"{_force(s.measured_force, mode, c.g):>14}")
    lines.append(f"samples: {len(report.samples)}   "
                 f"min {_force(report.min_force, mode, c.g)}   "
                 f"mean {_force(report.mean_force, mode, c.g)}")
    lines.append(
        f"required (strict, n x per-block): "
        f"{_force(report.required_total, mode, c.g)} -> "
        f"{_verdict(report.passes_si)}")
    lines.append(
        f"required (published mass-based chain): "
        f"{fmt_sig(report.required_published)} -> "
        f"{_verdict(report.passes_published)}")
    lines.append(f"verdict: {report.verdict}")
    lines.append("note: curved-surface derating factors are calibrated to the "
                 "measured adhesion floor, not measured per diameter")
    return "\n".join(lines)
