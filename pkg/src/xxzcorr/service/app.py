"""FastAPI service wrapping the core package.

The CLI is a thin client of these endpoints; CSV payloads are rendered
here (12 significant digits, '.' decimal separator, newline-terminated
rows) so that byte-identical output does not depend on the client.
"""
from __future__ import annotations

import csv
import io
import math

from fastapi import FastAPI
from fastapi.responses import JSONResponse, PlainTextResponse

from .._numerics import LN2, fmt12
from ..correlations import CorrelationKind, CorrelationResult, optimize
from ..entropies import conditional_entropy, post_entropy, reduced_entropy
from ..errors import (
    InvalidState,
    NoBracket,
    NonPositiveTemperature,
    NoTransitionFound,
    PairNotBorn,
    RangeUnsupported,
)
from ..model import ModelParams, thermal_xstate, thermo_entropy
from ..phasemap import BoundaryKind, rasterize, trace_boundary
from ..transitions import TransitionReport, attach_fit, classify, scan_path
from ..verify import run_suites
from . import schemas

import numpy as np

#: public (dashed) names <-> core enum values
_BOUNDARY_NAMES = {
    "zero": BoundaryKind.ZERO,
    "pi-half": BoundaryKind.PI_HALF,
    "zero-prime": BoundaryKind.ZERO_PRIME,
    "branch-swap": BoundaryKind.BRANCH_SWAP,
}
_BOUNDARY_LABELS = {v: k for k, v in _BOUNDARY_NAMES.items()}


def _unit_factor(unit: str) -> float:
    return 1.0 / LN2 if unit == "bits" else 1.0


def _csv_text(header: list[str], rows: list[list[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _point_response(result: CorrelationResult, unit: str) -> schemas.PointResponse:
    k = _unit_factor(unit)
    interior_val = result.interior[1] * k if result.interior else None
    interior_ang = result.interior[0] if result.interior else None
    return schemas.PointResponse(
        kind=result.kind.value,
        value=result.value * k,
        unit=unit,
        optimal_angle_rad=result.optimal_angle,
        optimal_angle_deg=math.degrees(result.optimal_angle),
        branch=result.branch.value,
        branch_values=schemas.BranchValues(
            at_zero=result.at_zero * k,
            at_pi_half=result.at_pi_half * k,
            interior=interior_val,
            interior_angle_rad=interior_ang,
        ),
        degenerate=result.degenerate,
    )


def render_profile_csv(req: schemas.ProfileRequest) -> str:
    p = ModelParams(req.J, req.Jz, req.B, req.T)
    s = thermal_xstate(p)
    k = _unit_factor(req.unit)
    thetas = np.linspace(0.0, math.pi / 2.0, req.n_theta)
    s_post = np.asarray(post_entropy(s, thetas), dtype=float)
    s_cond = np.asarray(conditional_entropy(s, thetas), dtype=float)
    s_pre = thermo_entropy(p)
    # deficit(theta) = S_post - S_pre; discord(theta) = S_cond - (S_pre - S(rho_B))
    cond_offset = s_pre - reduced_entropy(s)
    rows = [
        [
            fmt12(t),
            fmt12(sp * k),
            fmt12(sc * k),
            fmt12((sp - s_pre) * k),
            fmt12((sc - cond_offset) * k),
        ]
        for t, sp, sc in zip(thetas, s_post, s_cond)
    ]
    return _csv_text(["theta_rad", "S_post", "S_cond", "deficit", "discord"], rows)


def _transition_model(report: TransitionReport) -> schemas.TransitionModel:
    fit = None
    if report.fit is not None:
        fit = schemas.ExponentFitModel(
            beta=report.fit.beta,
            amplitude=report.fit.amplitude,
            r_squared=report.fit.r_squared,
            window_frac=report.fit.window_frac,
            n_points=report.fit.n_points,
        )
    return schemas.TransitionModel(
        kind=report.kind.value,
        T_c=report.T_c,
        angle_jump_rad=report.angle_jump,
        angle_jump_deg=math.degrees(report.angle_jump),
        side=report.side.value,
        fit=fit,
    )


def run_scan(req: schemas.ScanRequest) -> schemas.ScanResponse:
    scan = scan_path(
        req.J, req.Jz, req.B, (req.t_min, req.t_max), req.n, req.kind
    )
    k = _unit_factor(req.unit)
    rows = [
        [fmt12(s.T), fmt12(s.angle), fmt12(s.value * k), s.branch.value]
        for s in scan.samples
    ]
    csv_text = _csv_text(["T", "angle_rad", "value", "branch"], rows)
    try:
        reports = [attach_fit(scan, r, req.fit_window) for r in classify(scan)]
    except NoTransitionFound:
        reports = []
    return schemas.ScanResponse(
        csv=csv_text, transitions=[_transition_model(r) for r in reports]
    )


def render_boundary_csv(req: schemas.BoundaryRequest) -> str:
    kind = _BOUNDARY_NAMES[req.boundary]
    b_values = np.linspace(req.b_min, req.b_max, req.n_b)
    curve = trace_boundary(
        kind, req.kind, req.J, req.Jz, b_values, (req.t_min, req.t_max)
    )
    label = _BOUNDARY_LABELS[curve.kind]
    rows = [
        [fmt12(pt.T), fmt12(pt.B), label, fmt12(pt.residual)]
        for pt in curve.points
    ]
    return _csv_text(["T", "B", "kind", "residual"], rows)


def run_phase_diagram(req: schemas.PhaseDiagramRequest) -> schemas.PhaseDiagramResponse:
    diagram = rasterize(
        req.J,
        req.Jz,
        (req.t_min, req.t_max),
        (req.b_min, req.b_max),
        req.resolution,
        req.kind,
    )
    rows = [
        [fmt12(t), fmt12(b), diagram.labels[i][j].value]
        for i, t in enumerate(diagram.t_values)
        for j, b in enumerate(diagram.b_values)
    ]
    grid_csv = _csv_text(["T", "B", "region"], rows)
    boundaries = {}
    for curve in diagram.boundaries:
        label = _BOUNDARY_LABELS[curve.kind]
        boundaries[label] = _csv_text(
            ["T", "B", "kind", "residual"],
            [
                [fmt12(pt.T), fmt12(pt.B), label, fmt12(pt.residual)]
                for pt in curve.points
            ],
        )
    return schemas.PhaseDiagramResponse(grid_csv=grid_csv, boundaries=boundaries)


def create_app() -> FastAPI:
    app = FastAPI(
        title="xxzcorr",
        description=(
            "Quantum discord and one-way work deficit of the two-qubit XXZ "
            "dimer in a field: branch optimization, phase boundaries and "
            "transition classification."
        ),
        version="0.1.0",
    )

    @app.exception_handler(NonPositiveTemperature)
    @app.exception_handler(RangeUnsupported)
    @app.exception_handler(InvalidState)
    @app.exception_handler(ValueError)
    async def _invalid(request, exc):
        return JSONResponse(
            status_code=422, content={"error": "invalid_params", "detail": str(exc)}
        )

    @app.exception_handler(NoBracket)
    async def _no_bracket(request, exc):
        return JSONResponse(
            status_code=409, content={"error": "no_bracket", "detail": str(exc)}
        )

    @app.exception_handler(PairNotBorn)
    async def _pair_not_born(request, exc):
        return JSONResponse(
            status_code=409, content={"error": "pair_not_born", "detail": str(exc)}
        )

    @app.get("/health", response_model=schemas.HealthResponse)
    def health() -> schemas.HealthResponse:
        return schemas.HealthResponse()

    @app.post("/point", response_model=schemas.PointResponse)
    def point(req: schemas.PointRequest) -> schemas.PointResponse:
        p = ModelParams(req.J, req.Jz, req.B, req.T)
        result = optimize(p, CorrelationKind(req.kind), grid_n=req.grid_n)
        return _point_response(result, req.unit)

    @app.post("/profile", response_class=PlainTextResponse)
    def profile(req: schemas.ProfileRequest) -> PlainTextResponse:
        return PlainTextResponse(render_profile_csv(req), media_type="text/csv")

    @app.post("/scan", response_model=schemas.ScanResponse)
    def scan(req: schemas.ScanRequest) -> schemas.ScanResponse:
        return run_scan(req)

    @app.post("/boundary", response_class=PlainTextResponse)
    def boundary(req: schemas.BoundaryRequest) -> PlainTextResponse:
        return PlainTextResponse(render_boundary_csv(req), media_type="text/csv")

    @app.post("/phase-diagram", response_model=schemas.PhaseDiagramResponse)
    def phase_diagram(req: schemas.PhaseDiagramRequest) -> schemas.PhaseDiagramResponse:
        return run_phase_diagram(req)

    @app.post("/verify", response_model=schemas.VerifyResponse)
    def verify(req: schemas.VerifyRequest) -> schemas.VerifyResponse:
        try:
            results = run_suites(req.suites, seed=req.seed)
        except KeyError as exc:
            raise ValueError(str(exc)) from exc
        suites = [
            schemas.SuiteModel(name=r.name, passed=r.passed, detail=r.detail)
            for r in results
        ]
        return schemas.VerifyResponse(
            passed=all(r.passed for r in results), suites=suites
        )

    return app
