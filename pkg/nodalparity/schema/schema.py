from fractions import Fraction
from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from nodalparity.components.antisym import TranslationVector
from nodalparity.components.spectra import Eigenspace, Family, TorusShape
from nodalparity.config.config import CountConfig, NumericsConfig, RenderConfig, RuntimeConfig
from nodalparity.config.constants import Palette, ValidationConfig
from nodalparity.utils.utils import fraction_record, parse_fraction


# ---------------------------------------------------------------------------------------------------------------
# Run Configuration
# ---------------------------------------------------------------------------------------------------------------

Subcommand = Literal["spectrum", "antisym", "count", "parity-scan", "construct", "render", "verify-arith"]


class RunConfig(BaseModel):
    """Resolved CLI configuration; embedded verbatim in every report."""

    subcommand: Subcommand
    rho_sq: Optional[str] = Field(None, description='Torus shape: rho^2 as "a/b" or "irrational:<rho>".')
    lambda_max: Optional[str] = Field(None, description="Upper eigenvalue bound, exact rational text.")
    eigenvalue: Optional[str] = Field(None, description="Single eigenvalue, exact rational text.")
    family: Optional[Family] = None
    m: Optional[int] = Field(None, ge=0)
    n: Optional[int] = Field(None, ge=0)
    k: Optional[int] = None
    epsilon: Optional[float] = None
    input: Optional[str] = Field(None, description="Eigenfunction document {lambda, coeffs}.")

    base_resolution: int = CountConfig.base_resolution
    max_resolution: int = CountConfig.max_resolution
    tau_relative: float = Field(CountConfig.tau_relative, ge=0)
    refinement_factor: int = Field(CountConfig.refinement_factor, ge=2)
    resolution: int = Field(NumericsConfig.HYPERBOLA_RESOLUTION, description="Fixed grid for ξ-point extraction and renders.")

    seed: int = NumericsConfig.SEED
    functions: int = Field(NumericsConfig.FUNCTIONS_PER_EIGENSPACE, ge=1)
    sample_count: int = Field(NumericsConfig.SAMPLE_COUNT, ge=1)
    threads: int = Field(default_factory=lambda: RuntimeConfig().threads, ge=1)
    forms: List[List[int]] = Field(default_factory=list, description="(alpha, beta) pairs for verify-arith.")

    output: Optional[str] = None
    excel: Optional[str] = None
    render: Optional[str] = None
    labels_pgm: Optional[str] = None
    width: int = RenderConfig.WIDTH
    height: int = RenderConfig.HEIGHT
    palette: Literal["sign", "domains"] = RenderConfig.PALETTE

    @field_validator("rho_sq")
    @classmethod
    def _torus_parses(cls, value: Optional[str]) -> Optional[str]:
        if value is not None:
            TorusShape.parse(value)
        return value

    @field_validator("lambda_max", "eigenvalue")
    @classmethod
    def _positive_rational(cls, value: Optional[str]) -> Optional[str]:
        if value is not None and parse_fraction(value) <= 0:
            raise ValueError(f"must be positive, got {value}")
        return value

    @field_validator("forms")
    @classmethod
    def _pairs(cls, value: List[List[int]]) -> List[List[int]]:
        for pair in value:
            if len(pair) != 2:
                raise ValueError(f"forms are (alpha, beta) pairs, got {pair}")
        return value

    @model_validator(mode="after")
    def _consistent(self) -> "RunConfig":
        if self.base_resolution < ValidationConfig.MIN_GRID_RESOLUTION:
            raise ValueError(f"base_resolution must be at least {ValidationConfig.MIN_GRID_RESOLUTION}")
        if self.base_resolution > self.max_resolution:
            raise ValueError("base_resolution must not exceed max_resolution")
        if self.resolution < ValidationConfig.MIN_GRID_RESOLUTION:
            raise ValueError(f"resolution must be at least {ValidationConfig.MIN_GRID_RESOLUTION}")
        if min(self.width, self.height) < ValidationConfig.MIN_RENDER_SIZE:
            raise ValueError(f"image size must be at least {ValidationConfig.MIN_RENDER_SIZE} pixels per side")
        needs_torus = {"spectrum", "antisym", "count", "parity-scan", "render"}
        if self.subcommand in needs_torus and self.rho_sq is None and self.k is None:
            raise ValueError(f"{self.subcommand} needs --rho-sq")
        return self

    def torus(self) -> TorusShape:
        return TorusShape.parse(self.rho_sq)

    def count_config(self) -> CountConfig:
        return CountConfig(
            base_resolution=self.base_resolution,
            max_resolution=self.max_resolution,
            tau_relative=self.tau_relative,
            refinement_factor=self.refinement_factor,
        )


# ---------------------------------------------------------------------------------------------------------------
# Spectrum Records
# ---------------------------------------------------------------------------------------------------------------

class FractionRecord(BaseModel):
    num: int
    den: int = Field(..., gt=0)


class IrrationalEigenvalueRecord(BaseModel):
    m_sq: int = Field(..., description="lambda = m_sq + n_sq / rho^2")
    n_sq: int
    approx: float


class BasisRecord(BaseModel):
    family: Family
    m: int
    n: int


class EigenspaceRecord(BaseModel):
    eigenvalue: Union[FractionRecord, IrrationalEigenvalueRecord] = Field(..., alias="lambda")
    multiplicity: int
    basis: List[BasisRecord]
    model_config = ConfigDict(validate_by_name=True)


class SpectrumReport(BaseModel):
    config: RunConfig
    torus: str
    eigenspaces: List[EigenspaceRecord]


def eigenspace_record(space: Eigenspace) -> EigenspaceRecord:
    if space.eigenvalue is not None:
        eigenvalue = FractionRecord(**fraction_record(space.eigenvalue))
    else:
        m, n = space.index
        eigenvalue = IrrationalEigenvalueRecord(m_sq=m * m, n_sq=n * n, approx=space.approx)
    return EigenspaceRecord(
        eigenvalue=eigenvalue,
        multiplicity=space.multiplicity,
        basis=[BasisRecord(family=b.family, m=b.m, n=b.n) for b in space.basis],
    )


# ---------------------------------------------------------------------------------------------------------------
# Anti-symmetry Records
# ---------------------------------------------------------------------------------------------------------------

class TranslationVectorRecord(BaseModel):
    v1_over_pi: FractionRecord
    v2_over_rho_pi: FractionRecord


def vector_record(v: TranslationVector) -> TranslationVectorRecord:
    return TranslationVectorRecord(
        v1_over_pi=FractionRecord(**fraction_record(v.v1_over_pi)),
        v2_over_rho_pi=FractionRecord(**fraction_record(v.v2_over_rho_pi)),
    )


def vector_from_texts(texts: Dict[str, str]) -> TranslationVector:
    return TranslationVector(Fraction(texts["v1_over_pi"]), Fraction(texts["v2_over_rho_pi"]))


class AntisymReport(BaseModel):
    config: RunConfig
    torus: str
    regime: str
    eigenspace: EigenspaceRecord
    vector: TranslationVectorRecord
    exact_minus_identity: bool = Field(..., description="Every basis function maps to minus itself.")
    double_shift_identity: bool = Field(..., description="Translation by 2v acts as the identity.")
    sampling_residual: float = Field(..., description="max |u(x+v) + u(x)| for one seeded random eigenfunction.")


# ---------------------------------------------------------------------------------------------------------------
# Nodal Count Records
# ---------------------------------------------------------------------------------------------------------------

class DecompositionSummary(BaseModel):
    count: int
    signs: List[int]
    areas: List[float]
    resolution: List[int]
    positive: int
    negative: int


class CountReport(BaseModel):
    config: RunConfig
    eigenspace: EigenspaceRecord
    count: int
    signs: List[int]
    areas: List[float]
    resolution: int
    labels_pgm: Optional[str] = None
    image: Optional[str] = None


class RenderReport(BaseModel):
    config: RunConfig
    image: str
    width: int
    height: int
    palette: Literal["sign", "domains"] = Palette.SIGN
    grid: List[int]


# ---------------------------------------------------------------------------------------------------------------
# Parity Scan Records
# ---------------------------------------------------------------------------------------------------------------

class FunctionCheckRecord(BaseModel):
    index: int
    count: Optional[int] = None
    even: Optional[bool] = None
    resolution: Optional[int] = None
    pairs: Optional[int] = None
    max_discrepancy: Optional[int] = None
    sampling_residual: Optional[float] = None
    status: str
    error: Optional[str] = None


class EigenspaceScanRecord(BaseModel):
    eigenspace: EigenspaceRecord
    vector: Optional[TranslationVectorRecord] = None
    exact_check: Optional[bool] = None
    functions: List[FunctionCheckRecord] = Field(default_factory=list)
    status: str
    error: Optional[str] = None


class ParityScanReport(BaseModel):
    config: RunConfig
    torus: str
    regime: str
    eigenspaces: List[EigenspaceScanRecord]
    checked_functions: int
    passed: bool
    exit_code: int = 0


# ---------------------------------------------------------------------------------------------------------------
# Construction Records
# ---------------------------------------------------------------------------------------------------------------

class QuadrantRecord(BaseModel):
    points: int
    lower_left: int
    upper_right: int
    off_diagonal: int
    excluded: int
    min_off_diagonal_abs_xi1: Optional[float] = None


class ConstructionReport(BaseModel):
    config: Optional[RunConfig] = None
    params: Dict[str, Any]
    expected_count: int = Field(..., description="2mn+1")
    predicted_count: Optional[int] = Field(None, description="2mn+1 for even k, 4mn for odd k")
    actual_count: Optional[int] = None
    channel_sign: Optional[int] = None
    positive_domains: Optional[int] = None
    negative_domains: Optional[int] = None
    resolution: Optional[int] = None
    matches_expected: Optional[bool] = None
    residuals: Dict[str, Optional[float]] = Field(default_factory=dict)
    quadrants: Optional[QuadrantRecord] = None
    half_period: Optional[Dict[str, Any]] = None
    negative_area: Optional[float] = None
    negative_area_limit: Optional[float] = None
    image: Optional[str] = None
    passed: bool = Field(..., alias="pass")
    status: str
    error: Optional[str] = None
    exit_code: int = 0
    model_config = ConfigDict(validate_by_name=True)


# ---------------------------------------------------------------------------------------------------------------
# Arithmetic Records
# ---------------------------------------------------------------------------------------------------------------

class ArithRecord(BaseModel):
    alpha: int
    beta: int
    lambda_max: int
    checked: int
    exactly_one_odd: int
    both_odd: int
    violations: List[List[int]]
    passed: bool


class ArithReport(BaseModel):
    config: RunConfig
    forms: List[ArithRecord]
    passed: bool
