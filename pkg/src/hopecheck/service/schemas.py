"""Pydantic request/response models for the HTTP service.

Wire keys mirror the JSON document formats of the core modules
("K"/"Hdom"/"Krel"/"Hrel" model forms, "timeBound" run systems, verdict
objects); multi-word fields use camelCase aliases.
"""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field


class ApiModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)


class ModelDocument(ApiModel):
    """Either canonical form (K blocks + Hdom) or raw relations (Krel/Hrel)."""

    worlds: list[str]
    agents: list[str]
    K: Optional[dict[str, list[list[str]]]] = None
    Hdom: Optional[dict[str, list[str]]] = None
    Krel: Optional[dict[str, list[tuple[str, str]]]] = None
    Hrel: Optional[dict[str, list[tuple[str, str]]]] = None
    valuation: dict[str, list[str]] = Field(default_factory=dict)


class ViolationDocument(ApiModel):
    kind: str
    agent: str
    witness: list[str]


class CheckRequest(ApiModel):
    model: ModelDocument
    formula: str
    world: Optional[str] = None


class CheckResponse(ApiModel):
    formula: str
    world: Optional[str] = None
    value: Optional[bool] = None
    values: Optional[dict[str, bool]] = None
    valid: Optional[bool] = None


class ValidateRequest(ApiModel):
    model: ModelDocument


class ValidateResponse(ApiModel):
    ok: bool
    violations: list[ViolationDocument]


class ValidityRequest(ApiModel):
    formula: str
    agents: list[str]
    max_worlds: int = Field(3, alias="maxWorlds", ge=1)
    max_models: Optional[int] = Field(None, alias="maxModels", ge=1)


class VerdictDocument(ApiModel):
    verdict: str
    bound: Optional[int] = None
    model: Optional[ModelDocument] = None
    world: Optional[str] = None


class AxiomBounds(ApiModel):
    agents: int = Field(1, ge=1)
    atoms: int = Field(1, ge=0)
    max_worlds: int = Field(2, alias="maxWorlds", ge=1)
    model_cap: int = Field(20_000, alias="modelCap", ge=1)


class AxiomsRequest(ApiModel):
    model: Optional[ModelDocument] = None
    samples: Optional[list[str]] = None
    bounds: Optional[AxiomBounds] = None


class SchemaFailureDocument(ApiModel):
    schema_name: str = Field(alias="schema")
    agent: str
    formula: str
    world: str
    model: ModelDocument


class SchemaResultDocument(ApiModel):
    name: str
    passed: bool
    checks: int
    failures: int
    first_failure: Optional[SchemaFailureDocument] = Field(None, alias="firstFailure")


class AxiomsResponse(ApiModel):
    all_passed: bool = Field(alias="allPassed")
    models_checked: int = Field(alias="modelsChecked")
    schemas: list[SchemaResultDocument]


class RunDocument(ApiModel):
    id: str
    local: dict[str, list[str]]
    correct: dict[str, bool]
    atoms: dict[str, list[bool]] = Field(default_factory=dict)


class RunSystemDocument(ApiModel):
    agents: list[str]
    time_bound: int = Field(alias="timeBound", ge=1)
    runs: list[RunDocument]


class CompileRunsRequest(ApiModel):
    system: RunSystemDocument


class CompileRunsResponse(ApiModel):
    model: ModelDocument


class UtteranceDocument(ApiModel):
    speaker: str
    formula: str


class PuzzleRequest(ApiModel):
    agents: list[str]
    types: list[str] = Field(default_factory=lambda: ["knight", "knave"])
    utterances: list[UtteranceDocument]


class PuzzleResponse(ApiModel):
    assignments: list[dict[str, str]]
    unique: bool


class ClaimDocument(ApiModel):
    world: str
    formula: str
    expected: bool
    actual: bool
    passed: bool


class DemoResponse(ApiModel):
    name: str
    all_passed: bool = Field(alias="allPassed")
    claims: list[ClaimDocument]
    system: RunSystemDocument
    model: ModelDocument


class HealthResponse(ApiModel):
    status: str
    version: str
