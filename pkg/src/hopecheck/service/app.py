"""HTTP endpoints wrapping the core library.

Every endpoint is stateless: requests carry complete model/system/puzzle
documents and responses are plain JSON.  Library errors (parse problems,
frame violations, enumeration limits) surface as 422 responses with a
structured detail; logical negatives (countermodels, violations, unsat) are
ordinary 200 responses.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..checker import (
    axiom_suite,
    axiom_sweep,
    bounded_satisfiability,
    bounded_validity,
    evaluate,
)
from ..creed import puzzle_from_document, solve_puzzle
from ..errors import FormulaSyntaxError, FrameConditionError, HopecheckError
from ..formula import parse, print_formula
from ..kripke import (
    model_from_document,
    model_to_document,
    raw_from_model,
    raw_model_from_document,
    validate,
)
from ..runs import brain_in_vat_example, compile_run_system, run_system_from_document, run_system_to_document
from . import schemas


def _error_detail(exc: HopecheckError) -> dict:
    detail: dict = {"error": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, FormulaSyntaxError):
        detail["position"] = exc.position
    if isinstance(exc, FrameConditionError):
        detail["violations"] = [v.to_document() for v in exc.violations]
    return detail


def create_app() -> FastAPI:
    app = FastAPI(
        title="hopecheck",
        version=__version__,
        description="Model checking for the multi-agent logic of knowledge and hope.",
    )

    @app.exception_handler(HopecheckError)
    async def handle_library_error(request: Request, exc: HopecheckError):
        return JSONResponse(status_code=422, content={"detail": _error_detail(exc)})

    @app.get("/health", response_model=schemas.HealthResponse)
    def health():
        return schemas.HealthResponse(status="ok", version=__version__)

    @app.post("/check", response_model=schemas.CheckResponse, response_model_exclude_none=True)
    def check(request: schemas.CheckRequest):
        model = model_from_document(request.model.model_dump(by_alias=True, exclude_none=True))
        formula = parse(request.formula, model.agents)
        if request.world is not None:
            value = evaluate(model, request.world, formula)
            return schemas.CheckResponse(formula=request.formula, world=request.world, value=value)
        values = {w: evaluate(model, w, formula) for w in model.worlds}
        return schemas.CheckResponse(
            formula=request.formula, values=values, valid=all(values.values())
        )

    @app.post("/validate", response_model=schemas.ValidateResponse)
    def validate_model(request: schemas.ValidateRequest):
        doc = request.model.model_dump(by_alias=True, exclude_none=True)
        if doc.get("Krel") is not None or doc.get("Hrel") is not None:
            raw = raw_model_from_document(doc)
        else:
            raw = raw_from_model(model_from_document(doc))
        violations = validate(raw)
        return schemas.ValidateResponse(
            ok=not violations,
            violations=[schemas.ViolationDocument(**v.to_document()) for v in violations],
        )

    @app.post("/validity", response_model=schemas.VerdictDocument, response_model_exclude_none=True)
    def validity(request: schemas.ValidityRequest):
        formula = parse(request.formula, request.agents)
        verdict = bounded_validity(
            formula, request.max_worlds, universe=request.agents, max_models=request.max_models
        )
        return schemas.VerdictDocument(**verdict.to_document())

    @app.post("/sat", response_model=schemas.VerdictDocument, response_model_exclude_none=True)
    def sat(request: schemas.ValidityRequest):
        formula = parse(request.formula, request.agents)
        result = bounded_satisfiability(
            formula, request.max_worlds, universe=request.agents, max_models=request.max_models
        )
        return schemas.VerdictDocument(**result.to_document())

    @app.post("/axioms", response_model=schemas.AxiomsResponse)
    def axioms(request: schemas.AxiomsRequest):
        if request.model is not None:
            model = model_from_document(request.model.model_dump(by_alias=True, exclude_none=True))
            samples = None
            if request.samples is not None:
                samples = [parse(text, model.agents) for text in request.samples]
            report = axiom_suite(model, samples)
        else:
            bounds = request.bounds or schemas.AxiomBounds()
            agent_pool = [chr(ord("a") + i) for i in range(bounds.agents)]
            atom_pool = [chr(ord("p") + i) for i in range(bounds.atoms)]
            report = axiom_sweep(
                agent_pool, atom_pool, bounds.max_worlds, model_cap=bounds.model_cap
            )
        return schemas.AxiomsResponse(**report.to_document())

    @app.post(
        "/compile-runs",
        response_model=schemas.CompileRunsResponse,
        response_model_exclude_none=True,
    )
    def compile_runs(request: schemas.CompileRunsRequest):
        system = run_system_from_document(request.system.model_dump(by_alias=True))
        model = compile_run_system(system)
        return schemas.CompileRunsResponse(
            model=schemas.ModelDocument(**model_to_document(model))
        )

    @app.post("/puzzle", response_model=schemas.PuzzleResponse)
    def puzzle(request: schemas.PuzzleRequest):
        agents, utterances = puzzle_from_document(request.model_dump(by_alias=True))
        solutions = solve_puzzle(agents, utterances)
        return schemas.PuzzleResponse(
            assignments=[s.to_document() for s in solutions], unique=len(solutions) == 1
        )

    @app.post("/demo/{name}", response_model=schemas.DemoResponse)
    def demo(name: str):
        if name != "brain-in-vat":
            raise HTTPException(404, f"unknown demo {name!r} (available: brain-in-vat)")
        system, claims = brain_in_vat_example()
        model = compile_run_system(system)
        claim_docs = []
        all_passed = True
        for claim in claims:
            actual = evaluate(model, claim.world, claim.formula)
            passed = actual == claim.expected
            all_passed = all_passed and passed
            claim_docs.append(
                schemas.ClaimDocument(
                    world=claim.world,
                    formula=print_formula(claim.formula),
                    expected=claim.expected,
                    actual=actual,
                    passed=passed,
                )
            )
        return schemas.DemoResponse(
            name=name,
            all_passed=all_passed,
            claims=claim_docs,
            system=schemas.RunSystemDocument(**run_system_to_document(system)),
            model=schemas.ModelDocument(**model_to_document(model)),
        )

    return app


app = create_app()
