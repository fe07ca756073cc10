from __future__ import annotations

from typing import Literal, Optional, Union

from pydantic import BaseModel, Field

Endpoint = Union[float, Literal["-inf", "inf"]]


class Bounds(BaseModel):
    lo: Endpoint = Field(..., description="Certified lower bound, or '-inf'")
    hi: Endpoint = Field(..., description="Certified upper bound, or 'inf'")


class RunReportModel(BaseModel):
    sweeps: int = 0
    simplex_iterations: int = 0
    gauss_resolved: int = 0


class SolveResponse(BaseModel):
    status: Literal["solved", "infeasible", "error"]
    solver: str
    variables: dict[str, Bounds] = Field(default_factory=dict)
    report: RunReportModel = Field(default_factory=RunReportModel)
    message: Optional[str] = None


class SolveRequest(BaseModel):
    model: str = Field(..., description="Model text", examples=["0 <= x + y <= 1; 0 <= x - y <= 1;"])
    solver: Literal["lin", "gauss", "combined"] = "combined"
    order: Optional[list[str]] = None
    digits: int = Field(17, ge=1, le=40)
    thin_eps: float = Field(1e-10, ge=0)
    sweeps: int = Field(3, ge=1)
