"""
Pydantic models for input files, HTTP request bodies and run reports.
"""
import json
from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

# A ring element: m integers in [0, p^N), or a bare integer when m = 1
RingValue = Union[int, List[int]]


# ===== Context Schemas =====

class ContextSpec(BaseModel):
    """Arithmetic context of a file: W_N(F_{p^m}) with an optional explicit modulus."""
    p: int = Field(..., ge=2)
    m: int = Field(default=1, ge=1)
    N: int = Field(..., ge=1)
    modulus: Optional[List[int]] = None

    @model_validator(mode="after")
    def check_modulus_degree(self):
        if self.modulus is not None and len(self.modulus) != self.m + 1:
            raise ValueError(f"Modulus of degree {len(self.modulus) - 1} does not match m = {self.m}")
        return self


# ===== Matrix Schemas =====

class MatrixSpec(BaseModel):
    rows: int = Field(..., ge=0)
    cols: int = Field(..., ge=0)
    entries: List[RingValue]

    @model_validator(mode="after")
    def check_shape(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(f"{len(self.entries)} entries do not fill a {self.rows}x{self.cols} matrix")
        return self

    def grid(self) -> list:
        return [self.entries[i * self.cols:(i + 1) * self.cols] for i in range(self.rows)]


# ===== Order and Lattice Files =====

class OrderFile(BaseModel):
    """An O-order: structure constants c[i][j][k] with b_i·b_j = Σ_k c[i][j][k]·b_k."""
    context: ContextSpec
    dimension: int = Field(..., ge=1)
    labels: Optional[List[str]] = None
    structure_constants: List[List[List[RingValue]]]
    identity: List[RingValue]
    generators: Optional[List[str]] = None  # labels generating the order as an algebra
    group_size: Optional[int] = Field(default=None, ge=1)

    @model_validator(mode="after")
    def check_dimensions(self):
        d = self.dimension
        if len(self.structure_constants) != d or any(
            len(row) != d or any(len(cell) != d for cell in row) for row in self.structure_constants
        ):
            raise ValueError(f"structure_constants must be a {d}x{d}x{d} array")
        if len(self.identity) != d:
            raise ValueError(f"identity must have {d} coordinates")
        if self.labels is not None:
            if len(self.labels) != d or len(set(self.labels)) != d:
                raise ValueError(f"labels must be {d} distinct names")
            unknown = set(self.generators or []) - set(self.labels)
            if unknown:
                raise ValueError(f"Unknown generator labels: {sorted(unknown)}")
        return self


class LatticeFile(BaseModel):
    """A right lattice: one representation matrix per basis label of the order."""
    order: Optional[OrderFile] = None
    order_file: Optional[str] = None  # path relative to the lattice file
    rank: int = Field(..., ge=1)
    matrices: Dict[str, Union[MatrixSpec, List[List[RingValue]]]]
    name: str = ""

    @model_validator(mode="after")
    def check_order_source(self):
        if self.order is not None and self.order_file is not None:
            raise ValueError("Give either an inline order or an order_file, not both")
        return self


# ===== Polynomial and Point Schemas =====

class PolynomialTerm(BaseModel):
    exponents: List[int]
    coefficient: RingValue


class PolynomialFile(BaseModel):
    context: Optional[ContextSpec] = None
    n: int = Field(..., ge=1)
    terms: List[PolynomialTerm]

    @model_validator(mode="after")
    def check_exponents(self):
        for term in self.terms:
            if len(term.exponents) != self.n or any(e < 0 for e in term.exponents):
                raise ValueError(f"Exponent vector {term.exponents} does not fit {self.n} variables")
        return self


class PointSpec(BaseModel):
    """n coordinates, each given by l Witt digits in the residue field."""
    n: int = Field(..., ge=1)
    l: int = Field(..., ge=0)
    digits: List[List[RingValue]]

    @model_validator(mode="after")
    def check_shape(self):
        if len(self.digits) != self.n or any(len(d) != self.l for d in self.digits):
            raise ValueError(f"Point needs {self.n} coordinates of {self.l} digits each")
        return self


# ===== Request Schemas =====

WittOp = Literal["add", "mul", "teichmuller", "to-digits", "from-digits", "ghost"]
GroupOp = Literal["rigid", "endrank", "hh1", "census", "double-cosets"]


class WittRequest(BaseModel):
    op: WittOp
    p: int = Field(..., ge=2)
    m: int = Field(default=1, ge=1)
    N: int = Field(default=4, ge=1)
    x: Optional[Any] = None  # digits for add/mul/from-digits, element for to-digits/teichmuller
    y: Optional[Any] = None
    l: Optional[int] = Field(default=None, ge=0)
    index: int = Field(default=1, ge=0)  # ghost polynomial index


class RigidRequest(BaseModel):
    order: OrderFile
    lattice: LatticeFile
    precision: Optional[int] = Field(default=None, ge=1)


class CensusRequest(RigidRequest):
    max_colength: int = Field(..., ge=0)


class GenvalRequest(BaseModel):
    context: ContextSpec
    polynomial: PolynomialFile
    point: PointSpec
    precision: Optional[int] = Field(default=None, ge=1)
    witness: bool = False
    threshold: Optional[int] = Field(default=None, ge=0)


class GroupRequest(BaseModel):
    group: str
    subgroup: Optional[str] = None
    p: int = Field(..., ge=2)
    m: int = Field(default=1, ge=1)
    precision: Optional[int] = Field(default=None, ge=1)
    op: GroupOp = "rigid"
    max_colength: int = Field(default=2, ge=0)


# ===== Report Schemas =====

class PrecisionRetry(BaseModel):
    from_precision: int
    to_precision: int
    reason: str


class RunReport(BaseModel):
    """Machine-readable result of one command."""
    model_config = ConfigDict(populate_by_name=True)

    command: str
    format_version: str
    seed: int
    inputs: Dict[str, str] = Field(default_factory=dict)  # name -> sha256 digest
    context: Dict[str, Any] = Field(default_factory=dict)
    results: Dict[str, Any] = Field(default_factory=dict)
    precision_retries: List[PrecisionRetry] = Field(default_factory=list)
    timings: Optional[Dict[str, float]] = None

    def to_payload(self) -> dict:
        """JSON-ready dict; timings are left out entirely when not recorded."""
        payload = self.model_dump(mode="json")
        if payload.get("timings") is None:
            payload.pop("timings", None)
        return payload

    def to_json(self) -> str:
        return json.dumps(self.to_payload(), sort_keys=True, indent=2, ensure_ascii=False)
