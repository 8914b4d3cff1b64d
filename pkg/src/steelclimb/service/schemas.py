"""Pydantic request/response models for the analysis service.

Request quantity fields take either SI numbers or suffixed strings
("72 mm", "12 kgf.cm"), exactly like the YAML config files; the service
funnels them through the same config builders.
"""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

Quantity = float | str


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class MotorModel(_Strict):
    stall_torque: Quantity | None = None
    gear_ratio: Quantity | None = None
    count: int | None = None


class LinkageModel(_Strict):
    a: Quantity | None = None
    b: Quantity | None = None
    b1: Quantity | None = None
    e: Quantity | None = None
    f: Quantity | None = None
    crank_len: Quantity | None = None
    gamma: Quantity | None = None
    screw_pitch: Quantity | None = None
    screw_gear_ratio: Quantity | None = None
    total_transform_ratio: Quantity | None = None
    feed_travel_max: Quantity | None = None


class ConditionFactorsModel(_Strict):
    non_coated_flat: float | None = None
    coated_flat: float | None = None
    curved: list[list[Quantity]] | None = None  # [diameter, factor] pairs


class MagnetModel(_Strict):
    block_force_nominal: Quantity | None = None
    condition_factors: ConditionFactorsModel | None = None


class RobotModel(_Strict):
    """Overlay on the reference design; omitted fields keep its values."""

    mass: Quantity | None = None
    body_length: Quantity | None = None
    body_width: Quantity | None = None
    body_height: Quantity | None = None
    com_height: Quantity | None = None
    total_height: Quantity | None = None
    contact_span: Quantity | None = None
    block_pitch: Quantity | None = None
    track_width: Quantity | None = None
    moment_arm: Quantity | None = None
    contact_blocks_per_chain: int | None = None
    blocks_per_chain: int | None = None
    chain_count: int | None = None
    magnet: MagnetModel | None = None
    linkage: LinkageModel | None = None
    drive: MotorModel | None = None
    transform: MotorModel | None = None


class ConditionModel(_Strict):
    kind: str
    diameter: Quantity | None = None


class SurfaceModel(_Strict):
    inclination: Quantity
    mu: float
    side: Literal["top", "underneath"] = "top"
    condition: str | ConditionModel = "non_coated_flat"
    curvature_radius: Quantity | None = None


class SegmentModel(_Strict):
    surface: SurfaceModel
    length: Quantity
    speed_ref: Quantity


class MissionModel(_Strict):
    segments: list[SegmentModel] = Field(min_length=1)
    dt: Quantity | None = None
    stop_interval: Quantity | None = None
    pause_duration: Quantity | None = None
    stop_on_cliff: bool | None = None
    cliff_lookahead: Quantity | None = None
    imu_noise_sigma: Quantity | None = None
    alpha_rate_limit: float | None = None


class AnalysisOptions(_Strict):
    g: float | None = None
    units: Literal["si", "kgf"] = "si"
    sliding_bound: Literal["analytic", "endpoint"] = "analytic"
    release_friction: float = 0.78
    efficiency: float = 0.8
    mu_min: float | None = None


class ValidateRequest(_Strict):
    robot: RobotModel = Field(default_factory=RobotModel)
    g: float | None = None


class ViolationModel(_Strict):
    path: str
    requirement: str


class ValidateResponse(_Strict):
    ok: bool
    violations: list[ViolationModel]


class AnalyzeRequest(_Strict):
    surface: SurfaceModel
    robot: RobotModel = Field(default_factory=RobotModel)
    options: AnalysisOptions = Field(default_factory=AnalysisOptions)


class AdhesionModel(_Strict):
    per_block: float
    contacting_blocks: int
    total: float


class AnalyzeResponse(_Strict):
    sliding_required: float
    turnover_required_per_block: float
    per_block_required: float
    adhesion_available: AdhesionModel
    drive_torque_required: float
    drive_torque_available: float
    transform_torque_required: float
    transform_torque_available: float
    margins: dict[str, float]
    verdicts: dict[str, bool]
    all_pass: bool
    rendered: str


class EnvelopeRequest(_Strict):
    robot: RobotModel = Field(default_factory=RobotModel)
    phi_min_deg: float = 0.9
    phi_max_deg: float = 90.0
    mu_min: float = 0.4
    mu_max: float = 0.8
    steps: int = Field(default=100, ge=2)
    g: float | None = None


class MechanismRequest(_Strict):
    robot: RobotModel = Field(default_factory=RobotModel)
    steps: int = Field(default=200, ge=2)
    variant: Literal["derivation", "printed"] = "derivation"
    g: float | None = None


class SimulateRequest(_Strict):
    mission: MissionModel
    robot: RobotModel = Field(default_factory=RobotModel)
    seed: int = 0
    options: AnalysisOptions = Field(default_factory=AnalysisOptions)


class EventModel(_Strict):
    t: float
    name: str


class SimulateResponse(_Strict):
    steps: int
    distance: float
    max_sync_error: float
    terminal_event: str | None
    events: list[EventModel]
    failed: bool
    trace_csv: str


class PullTestRequest(_Strict):
    data_csv: str
    robot: RobotModel = Field(default_factory=RobotModel)
    options: AnalysisOptions = Field(default_factory=AnalysisOptions)


class PullTestRowModel(_Strict):
    surface: str
    diameter_mm: float | None
    scale_kg: float
    force: float


class PullTestResponse(_Strict):
    rows: list[PullTestRowModel]
    min_force: float
    mean_force: float
    per_block_required: float
    required_total: float
    required_published: float
    passes_si: bool
    passes_published: bool
    verdict: str
    rendered: str


class HealthResponse(_Strict):
    status: str
    version: str
