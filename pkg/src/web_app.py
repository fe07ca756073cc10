from __future__ import annotations

import logging
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request
from fastapi.templating import Jinja2Templates

from src.env_utils import load_env_file, server_settings
from src.errors import UnilinError
from src.model import parse
from src.output import build_response, print_outward
from src.schemas import SolveRequest, SolveResponse
from src.strategy import SolverOptions, solve

logger = logging.getLogger(__name__)

BASE_DIR = Path(__file__).resolve().parent.parent
TEMPLATES = Jinja2Templates(directory=str(BASE_DIR / "templates"))


def _run(payload: SolveRequest):
    options = SolverOptions(
        mode=payload.solver,
        order=tuple(payload.order) if payload.order else None,
        thin_eps=payload.thin_eps,
        sweeps=payload.sweeps,
    )
    try:
        return solve(parse(payload.model), options)
    except (UnilinError, ValueError) as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc


def create_app() -> FastAPI:
    app = FastAPI(title="UniLin Preview")

    @app.get("/health")
    def health() -> dict[str, str]:
        return {"status": "ok"}

    @app.post("/solve", response_model=SolveResponse, response_model_exclude_none=True)
    def solve_model(payload: SolveRequest) -> SolveResponse:
        box, report = _run(payload)
        return build_response(box, report)

    @app.post("/report")
    def report_page(payload: SolveRequest, request: Request):
        box, report = _run(payload)
        rows = []
        if not box.infeasible:
            for name, value in box.items():
                lo, hi = print_outward(value, payload.digits)
                rows.append({"name": name, "lo": lo, "hi": hi})
        context = {
            "request": request,
            "solver": report.mode,
            "infeasible": box.infeasible,
            "stage": report.infeasible_stage,
            "rows": rows,
            "sweeps": report.sweeps,
            "simplex_iterations": report.simplex_iterations,
            "gauss_resolved": report.gauss_resolved,
            "model_text": payload.model,
        }
        return TEMPLATES.TemplateResponse(request=request, name="report.html", context=context)

    return app


def serve() -> None:
    import uvicorn

    load_env_file(BASE_DIR)
    settings = server_settings()
    logging.basicConfig(level=logging.INFO)
    logger.info("serving on %s:%d", settings.host, settings.port)
    uvicorn.run(create_app(), host=settings.host, port=settings.port)


app = create_app()
