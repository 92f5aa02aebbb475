from datetime import datetime
from enum import Enum
from typing import Annotated, Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator
from sqlalchemy import Column, DateTime, Float, Integer, String, Text, Enum as SQLEnum
from sqlalchemy.orm import declarative_base
from sqlalchemy.sql import func

Base = declarative_base()

MAX_RESOLUTION = 2 ** 20


class RunStatus(str, Enum):
    STARTED = "started"
    SUCCEEDED = "succeeded"
    FAILED = "failed"
    INVALID = "invalid"
    NONCONVERGED = "nonconverged"


class ReportRun(Base):
    __tablename__ = "report_runs"

    id = Column(Integer, primary_key=True, index=True)
    command = Column(String, index=True)
    norm_label = Column(String)
    norm_digest = Column(String, index=True)
    status = Column(SQLEnum(RunStatus), default=RunStatus.STARTED)
    value = Column(Float, nullable=True)
    report = Column(Text)  # JSON string
    logs = Column(Text)  # JSON string
    created_at = Column(DateTime, default=func.now())
    updated_at = Column(DateTime, default=func.now(), onupdate=func.now())


# Norm files

Coordinate = Union[int, float, str]


class PolygonNormFile(BaseModel):
    type: Literal["polygon"]
    vertices: List[Tuple[Coordinate, Coordinate]] = Field(min_length=1)
    symmetrize: Optional[bool] = None


class LpNormFile(BaseModel):
    type: Literal["lp"]
    p: Union[float, Literal["inf"]]

    @field_validator("p")
    @classmethod
    def exponent_at_least_one(cls, v):
        if v != "inf" and not v >= 1:
            raise ValueError("p must be >= 1")
        return v


class EuclideanNormFile(BaseModel):
    type: Literal["euclidean"]


class SampledNormFile(BaseModel):
    type: Literal["sampled"]
    pairs: List[Tuple[float, float]] = Field(min_length=2)


class RegularNormFile(BaseModel):
    type: Literal["regular"]
    sides: int = Field(ge=4)
    rotation: float = 0.0

    @field_validator("sides")
    @classmethod
    def even_sides(cls, v):
        if v % 2:
            raise ValueError("sides must be even for a centrally symmetric polygon")
        return v


NormFile = Annotated[
    Union[PolygonNormFile, LpNormFile, EuclideanNormFile, SampledNormFile, RegularNormFile],
    Field(discriminator="type"),
]


# Run configuration

class Tolerances(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    tol_dir: float = 1e-9
    tol_norm: float = 1e-10
    tol_opt: float = 1e-12
    tol_orth: float = 1e-9
    tol_bis: float = 1e-10
    tol_const: float = 1e-6
    n_roberts: int = Field(4096, ge=8)
    n_fan: int = Field(64, ge=2)

    def with_overrides(self, overrides: Dict[str, Any]) -> "Tolerances":
        return Tolerances(**{**self.model_dump(), **overrides})


class Command(str, Enum):
    NORM_INFO = "norm-info"
    SINE = "sine"
    ORTHO = "ortho"
    BISECTOR = "bisector"
    INNER = "inner"
    CB = "cb"
    CS = "cs"
    DCONST = "dconst"
    IPQ = "ipq"
    SEARCH = "search"
    FIGURE = "figure"
    RUNS = "runs"


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"


class FigureKind(str, Enum):
    UNIT_CIRCLE = "unit-circle"
    BISECTOR_TRACE = "bisector-trace"
    INNER_PROJECTION = "inner-projection"
    REFLECTED_CIRCLE = "reflected-circle"


class OracleConfig(BaseModel):
    t_grid_size: int = Field(10001, ge=64)
    circle_grid_size: int = Field(512, ge=64)
    seed: int = 0


class SearchConfig(BaseModel):
    family: Literal["random", "affine-square"] = "random"
    count: int = Field(20, ge=0)
    n_half_min: int = Field(2, ge=2)
    n_half_max: int = Field(6, ge=2)
    seed: int = 0
    resolution: int = Field(128, ge=8, le=MAX_RESOLUTION)
    inner_resolution: int = Field(32, ge=2, le=MAX_RESOLUTION)


class RunConfig(BaseModel):
    command: Command
    norm_source: Optional[str] = None
    resolution: int = Field(256, ge=8, le=MAX_RESOLUTION)
    inner_resolution: int = Field(64, ge=2, le=MAX_RESOLUTION)
    tolerances: Tolerances = Tolerances()
    output_format: OutputFormat = OutputFormat.JSON
    svg_path: Optional[str] = None
    deterministic: bool = False
    seed: int = 0
    # command arguments
    x: Optional[Tuple[str, str]] = None
    y: Optional[Tuple[str, str]] = None
    offset: Optional[float] = None
    offset_max: float = Field(3.0, gt=0)
    n_steps: int = Field(64, ge=2)
    theta: Optional[float] = None
    method: Literal["chords", "support", "both"] = "chords"
    figure: Optional[FigureKind] = None
    search: SearchConfig = SearchConfig()
    ledger_url: Optional[str] = None
    limit: int = Field(20, ge=1)


# Reports

class ConstantReport(BaseModel):
    name: Literal["cB", "cS", "D"]
    value: float
    witness: Dict[str, Any] = {}
    resolution: int
    inner_resolution: int = 0
    tolerances: Dict[str, Any] = {}
    bounds_ok: bool
    exactness: str
    extras: Dict[str, Any] = {}


class ReportRunResponse(BaseModel):
    model_config = ConfigDict(from_attributes=True)

    id: int
    command: str
    norm_label: Optional[str]
    norm_digest: Optional[str]
    status: RunStatus
    value: Optional[float]
    created_at: datetime
    updated_at: datetime
