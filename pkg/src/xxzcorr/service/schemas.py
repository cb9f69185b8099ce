"""Pydantic request/response models for the HTTP service.

Every response carries a `schema` field (currently 1) so downstream
plotting scripts can pin the wire format.
"""
from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

CorrelationName = Literal["deficit", "discord"]
UnitName = Literal["nats", "bits"]
BoundaryName = Literal["zero", "pi-half", "zero-prime", "branch-swap"]

SCHEMA_VERSION = 1


class VersionedResponse(BaseModel):
    model_config = ConfigDict(populate_by_name=True)
    schema_version: int = Field(SCHEMA_VERSION, serialization_alias="schema")


class PointRequest(BaseModel):
    J: float = 1.0
    Jz: float = 0.0
    B: float = 0.0
    T: float = Field(gt=0.0)
    kind: CorrelationName = "deficit"
    unit: UnitName = "nats"
    grid_n: int = Field(181, ge=91, le=20001)


class BranchValues(BaseModel):
    at_zero: float
    at_pi_half: float
    interior: Optional[float] = None
    interior_angle_rad: Optional[float] = None


class PointResponse(VersionedResponse):
    kind: CorrelationName
    value: float
    unit: UnitName
    optimal_angle_rad: float
    optimal_angle_deg: float
    branch: str
    branch_values: BranchValues
    degenerate: bool


class ProfileRequest(BaseModel):
    J: float = 1.0
    Jz: float = 0.0
    B: float = 0.0
    T: float = Field(gt=0.0)
    n_theta: int = Field(181, ge=91, le=20001)
    unit: UnitName = "bits"


class ScanRequest(BaseModel):
    J: float = 1.0
    Jz: float = 0.0
    B: float = 0.0
    t_min: float = Field(gt=0.0)
    t_max: float = Field(gt=0.0)
    n: int = Field(400, ge=200, le=20000)
    kind: CorrelationName = "deficit"
    unit: UnitName = "bits"
    fit_window: float = Field(0.02, gt=0.0, le=0.05)


class ExponentFitModel(BaseModel):
    beta: float
    amplitude: float
    r_squared: float
    window_frac: float
    n_points: int


class TransitionModel(BaseModel):
    kind: str
    T_c: float
    angle_jump_rad: float
    angle_jump_deg: float
    side: str
    fit: Optional[ExponentFitModel] = None


class ScanResponse(VersionedResponse):
    csv: str
    transitions: list[TransitionModel]


class BoundaryRequest(BaseModel):
    boundary: BoundaryName
    kind: CorrelationName = "deficit"
    J: float = 1.0
    Jz: float = 0.0
    b_min: float = 0.5
    b_max: float = 2.5
    n_b: int = Field(41, ge=1, le=2001)
    t_min: float = Field(0.02, gt=0.0)
    t_max: float = 60.0


class PhaseDiagramRequest(BaseModel):
    J: float = 1.0
    Jz: float = 0.0
    t_min: float = Field(gt=0.0)
    t_max: float = Field(gt=0.0)
    b_min: float = 0.0
    b_max: float = 2.5
    resolution: int = Field(32, ge=16, le=256)
    kind: CorrelationName = "deficit"


class PhaseDiagramResponse(VersionedResponse):
    grid_csv: str
    boundaries: dict[str, str]


class VerifyRequest(BaseModel):
    suites: Optional[list[str]] = None
    seed: int = 20240817


class SuiteModel(BaseModel):
    name: str
    passed: bool
    detail: str


class VerifyResponse(VersionedResponse):
    passed: bool
    suites: list[SuiteModel]


class HealthResponse(VersionedResponse):
    status: str = "ok"
