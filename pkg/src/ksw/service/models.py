"""Pydantic envelopes for the HTTP service.

Payload bodies (structures, graphs, split data) stay as raw JSON objects;
their validation lives in :mod:`ksw.serialization`, which produces pointered
error messages that the service forwards verbatim.  The models here pin down
the option surface: tolerances, method names, signature overrides.
"""

from __future__ import annotations

from typing import Literal, Optional, Union

from pydantic import BaseModel, Field

DEFAULT_TOL = 1e-9

Signature = Literal["euclidean", "lorentzian", "antilorentzian"]
CausalityMethod = Literal["auto", "criterion", "fourier_motzkin"]


class VerifyRequest(BaseModel):
    structure: dict
    tolerance: float = Field(default=DEFAULT_TOL, gt=0)
    signature: Optional[Signature] = None


class DistanceRequest(BaseModel):
    graph: dict
    source: Union[str, int]
    target: Union[str, int]


class CausalityRequest(BaseModel):
    graph: dict
    tolerance: float = Field(default=DEFAULT_TOL, gt=0)


class ReconstructRequest(BaseModel):
    graph: dict
    tolerance: float = Field(default=DEFAULT_TOL, gt=0)


class WickRequest(BaseModel):
    graph: dict
    sigma: Optional[list[float]] = None
    tolerance: float = Field(default=DEFAULT_TOL, gt=0)
    seed: Optional[int] = None


class SplitRequest(BaseModel):
    split: dict
    tolerance: float = Field(default=DEFAULT_TOL, gt=0)


class SplitCausalityRequest(BaseModel):
    split: dict
    method: CausalityMethod = "auto"
    tolerance: float = Field(default=DEFAULT_TOL, gt=0)


class RunResult(BaseModel):
    """Uniform response: the CLI exit code plus the full report.

    ``exit_code`` 0 means the checked property holds, 1 means it decidedly
    fails, 2 means the question could not be decided (only split causality
    reaches 2 through a 200 response; malformed inputs surface as 422).
    """

    exit_code: int
    report: dict
