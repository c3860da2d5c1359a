from __future__ import annotations

import enum
from typing import Annotated, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

from src.config import DEFAULT_CAP, DEFAULT_SAMPLES, DEFAULT_SEED


# ── Enums ──────────────────────────────────────────────────────────────

class Command(str, enum.Enum):
    CHECK_GLA = "check-gla"
    PROLONG = "prolong"
    PSEUDO = "pseudo"
    DIST_FLAG = "dist-flag"
    DIST_SYMBOL = "dist-symbol"
    DIST_PP = "dist-pp"
    FIXTURES = "fixtures"


class OutputFormat(str, enum.Enum):
    TEXT = "text"
    MACHINE = "machine"


class RunStatus(str, enum.Enum):
    OK = "ok"
    REJECTED = "rejected"   # mathematical rejection, exit 2
    INVALID = "invalid"     # unreadable input, exit 3


# ── Run configuration ──────────────────────────────────────────────────

class RunConfig(BaseModel):
    command: Command
    input_path: Optional[str] = None
    cap: int = Field(default=DEFAULT_CAP, ge=1)
    samples: int = Field(default=DEFAULT_SAMPLES, ge=0)
    seed: int = DEFAULT_SEED
    output: OutputFormat = OutputFormat.TEXT
    fixture: Optional[str] = None
    list_fixtures: bool = False


# ── Input documents ────────────────────────────────────────────────────

Coefficient = Union[int, str]
BasisRef = Union[str, tuple[int, int]]   # a basis name or [degree, offset]


class Term(BaseModel):
    model_config = ConfigDict(extra="forbid")

    basis: BasisRef
    coeff: Coefficient = 1


class BracketEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    left: BasisRef
    right: BasisRef
    result: list[Term] = Field(default_factory=list)


class GlaDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["gla"] = "gla"
    degrees: dict[int, int]
    basis_names: Optional[list[str]] = None
    brackets: list[BracketEntry] = Field(default_factory=list)


class SymbolDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["symbol"] = "symbol"
    degrees: dict[int, int]
    basis_names: Optional[list[str]] = None
    brackets: list[BracketEntry] = Field(default_factory=list)
    e_basis: list[list[Coefficient]]
    f_basis: list[list[Coefficient]]


class VectorFieldDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["vector-fields"] = "vector-fields"
    n_vars: int = Field(ge=1)
    var_names: list[str]
    fields: list[list[Coefficient]]
    base_point: Optional[list[Coefficient]] = None


class FibrationDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["fibration"] = "fibration"
    n_vars: int = Field(ge=1)
    var_names: list[str]
    E_fields: list[list[Coefficient]]
    F_fields: list[list[Coefficient]]
    base_point: Optional[list[Coefficient]] = None


Document = Annotated[
    Union[GlaDocument, SymbolDocument, VectorFieldDocument, FibrationDocument],
    Field(discriminator="kind"),
]


# ── Reports ────────────────────────────────────────────────────────────

class CheckResult(BaseModel):
    name: str
    passed: bool
    detail: str = ""


class ErrorReport(BaseModel):
    error: str
    message: str
    details: dict = Field(default_factory=dict)


class GlaReport(BaseModel):
    kind: Literal["gla-report"] = "gla-report"
    dims: dict[int, int]
    total_dim: int
    nonzero_brackets: int
    fundamental: Optional[bool] = None     # None when the window reaches positive degrees
    generated_by_minus_one: Optional[bool] = None
    adjoint_injective_on_g0: Optional[bool] = None
    violations: list[str] = Field(default_factory=list)
    checks: list[CheckResult] = Field(default_factory=list)


class PartialRanks(BaseModel):
    n: int
    domain_dim: int
    rank: int
    tor_dim: int
    w_dim: int
    kernel_dim: int
    expected_kernel_dim: int


class ProlongReport(BaseModel):
    kind: Literal["prolong-report"] = "prolong-report"
    status: str
    height: Optional[int] = None
    cap: int
    min_degree: int
    dims_by_degree: list[int]
    total_dim: Optional[int] = None
    g0_trivial: bool
    partial_ranks: list[PartialRanks] = Field(default_factory=list)
    checks: list[CheckResult] = Field(default_factory=list)


class PseudoReport(BaseModel):
    kind: Literal["pseudo-report"] = "pseudo-report"
    g0_dim: int
    g0_trivial: bool
    fundamental: bool
    levi_nondegenerate: bool
    ch_dim: int
    ch_in_e_dim: int
    ch_in_f_dim: int
    prolongation: ProlongReport
    checks: list[CheckResult] = Field(default_factory=list)


class FlagReportModel(BaseModel):
    kind: Literal["flag-report"] = "flag-report"
    n_vars: int
    dims: list[int]
    depth: int
    bracket_generating: bool
    stabilized: bool
    levi_rank: int
    ch_dim: int
    ch_witness: Optional[list[str]] = None
    regular: bool
    samples: int
    seed: int
    checks: list[CheckResult] = Field(default_factory=list)


class SymbolReport(BaseModel):
    kind: Literal["symbol-report"] = "symbol-report"
    flag_dims: list[int]
    symbol: GlaDocument
    levi_nondegenerate: bool
    checks: list[CheckResult] = Field(default_factory=list)


class FibrationReport(BaseModel):
    kind: Literal["fibration-report"] = "fibration-report"
    points_checked: int
    seed: int
    note: str
    symbol: SymbolDocument
    vector_field_ch_dim: int
    pseudo: PseudoReport
    checks: list[CheckResult] = Field(default_factory=list)


AnalysisReport = Union[
    GlaReport, ProlongReport, PseudoReport, FlagReportModel, SymbolReport, FibrationReport
]


class RunReport(BaseModel):
    command: Command
    status: RunStatus
    exit_code: int
    result: Optional[AnalysisReport] = None
    error: Optional[ErrorReport] = None
