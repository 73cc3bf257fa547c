"""JSON wire formats and report models using Pydantic."""

import math
from enum import Enum
from typing import List, Literal, Optional
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


SCHEMA_VERSION = "v1"

# A complex entry on the wire: [re, im]
ComplexPair = List[float]


class Verdict(str, Enum):
    ENTANGLED = "Entangled"
    SEPARABLE = "Separable"
    INCONCLUSIVE = "Inconclusive"


class PositivityVerdict(str, Enum):
    SUPER_POSITIVE = "SuperPositive"
    NOT_SUPER_POSITIVE = "NotSuperPositive"


class ChainVerdict(str, Enum):
    ENTANGLED = "Entangled"
    FAILED = "Failed"


class MapVariant(str, Enum):
    TRANSPOSE = "transpose"
    IDENTITY = "identity"


class MatrixPayload(BaseModel):
    rows: int = Field(ge=0, le=4096)
    cols: int = Field(ge=0, le=4096)
    data: List[List[ComplexPair]]

    @field_validator("data")
    @classmethod
    def check_pairs(cls, v):
        for row in v:
            for entry in row:
                if len(entry) != 2:
                    raise ValueError("Each entry must be a [re, im] pair")
                if not all(math.isfinite(x) for x in entry):
                    raise ValueError("Entries must be finite numbers")
        return v

    @model_validator(mode="after")
    def check_shape(self):
        if len(self.data) != self.rows:
            raise ValueError(f"Expected {self.rows} rows, got {len(self.data)}")
        for idx, row in enumerate(self.data):
            if len(row) != self.cols:
                raise ValueError(f"Ragged row {idx}: expected {self.cols} entries, got {len(row)}")
        return self


class BipartitePayload(MatrixPayload):
    local_dim: int = Field(ge=1, le=8)

    @model_validator(mode="after")
    def check_local_dim(self):
        size = self.local_dim * self.local_dim
        if self.rows != size or self.cols != size:
            raise ValueError(f"local_dim {self.local_dim} requires a {size}x{size} matrix")
        return self


class MapPayload(BaseModel):
    n: int = Field(ge=1, le=8)
    m: int = Field(ge=1, le=8)
    images: List[MatrixPayload]

    @model_validator(mode="after")
    def check_images(self):
        if len(self.images) != self.n * self.n:
            raise ValueError(f"Expected {self.n * self.n} images, got {len(self.images)}")
        for idx, img in enumerate(self.images):
            if img.rows != self.m or img.cols != self.m:
                raise ValueError(f"Image {idx} must be {self.m}x{self.m}")
        return self


class HaKyeParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    a: float = Field(ge=0.0)
    b: float = Field(ge=0.0)
    c: float = Field(ge=0.0)
    theta: float = Field(ge=-math.pi, le=math.pi)


class SeparabilityReport(BaseModel):
    S: float
    T: float
    ppt: Optional[bool] = None
    verdict: Verdict


class PositivityProbe(BaseModel):
    trials: int = Field(ge=1)
    violations: int = Field(ge=0)
    worst: float


class WernerReport(BaseModel):
    n: int
    alpha: ComplexPair
    beta: ComplexPair
    T: float
    verdict: Verdict
    mc_samples: Optional[int] = None
    mc_deviation: Optional[float] = None


class SuperPositivityReport(BaseModel):
    c: float = Field(ge=0.0)
    n: int = Field(ge=2)
    variant: MapVariant
    verdict: PositivityVerdict
    witness: float


class SpaSummary(BaseModel):
    t_star: float = Field(gt=0.0, le=1.0)
    neg_norm: float = Field(ge=0.0)
    spa_trace: float
    normalized_by: float = 1.0


class CertificateReport(BaseModel):
    S: float
    T: float
    neg_norm: float = Field(ge=0.0)
    bound: float
    margin: float
    verdict: Verdict
    failed_conditions: List[str] = Field(default_factory=list)


class ChainEntry(BaseModel):
    name: str
    lhs: float
    rhs: float
    holds: bool


class CounterexampleReport(BaseModel):
    epsilon: float = Field(gt=0.0, le=0.25)
    delta: float
    delta_max: float
    params: HaKyeParams
    p_theta: float
    p_theta_printed: float
    k: float
    S_psi: float
    T_psi: float
    neg_norm_phi: float
    neg_norm_psi: float
    t_star: float
    bound: float
    margin: float
    positive: bool
    optimal: bool
    chain: List[ChainEntry]
    verdict: ChainVerdict

    @property
    def failed_links(self) -> List[str]:
        return [entry.name for entry in self.chain if not entry.holds]


class ReportEnvelope(BaseModel):
    """What the CLI writes for --json: one document per invocation."""

    command: str
    report: dict
    schema_version: Literal["v1"] = SCHEMA_VERSION


def export_json_schema() -> dict:
    """Export the JSON schemas of every wire format and report."""
    return {
        "matrix": MatrixPayload.model_json_schema(),
        "bipartite": BipartitePayload.model_json_schema(),
        "map": MapPayload.model_json_schema(),
        "hakye_params": HaKyeParams.model_json_schema(),
        "separability_report": SeparabilityReport.model_json_schema(),
        "werner_report": WernerReport.model_json_schema(),
        "certificate_report": CertificateReport.model_json_schema(),
        "counterexample_report": CounterexampleReport.model_json_schema(),
    }
