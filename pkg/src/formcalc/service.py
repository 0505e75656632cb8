"""HTTP service exposing the form calculus, entropy, channel, and
verification operations.

Request/response bodies reuse the package-wide JSON conventions: complex
scalars as [re, im] pairs, matrices as {"rows", "cols", "data"} with
row-major pairs, infinite entropy as the string "inf".  Domain errors map
to 400 responses; schema violations surface as FastAPI's usual 422.
"""

from __future__ import annotations

import math
from typing import Any, Literal, Optional

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field, field_validator

from . import __version__
from .algebra import AlgebraDescriptor, State, make_state
from .channels import (
    apply as channel_apply,
    check_schwarz,
    pullback_state,
)
from .entropy import LimitSchedule, relative_entropy, relative_entropy_limit
from .hermlin import ValidationError
from .qforms import (
    QuadraticForm,
    build_compatible_representation,
    geometric_mean,
    interpolate,
)
from .harness import (
    ConfigError,
    make_config,
    payload_to_channel,
    payload_to_matrix,
    matrix_to_payload,
    recheck_counterexample,
    run_suite,
)
from .harness.suites import DEFAULT_T_GRID, SUITE_ORDER


class MatrixModel(BaseModel):
    rows: int = Field(ge=0)
    cols: int = Field(ge=0)
    data: list[tuple[float, float]]

    @field_validator("data")
    @classmethod
    def _finite(cls, v):
        for k, (re, im) in enumerate(v):
            if not (math.isfinite(re) and math.isfinite(im)):
                raise ValueError(f"entry {k} is not finite")
        return v

    def to_ndarray(self) -> np.ndarray:
        return payload_to_matrix(
            {"rows": self.rows, "cols": self.cols, "data": [list(p) for p in self.data]}
        )

    @classmethod
    def from_ndarray(cls, M) -> "MatrixModel":
        payload = matrix_to_payload(M)
        return cls(rows=payload["rows"], cols=payload["cols"], data=payload["data"])


class ChannelModel(BaseModel):
    kind: Literal["kraus", "superoperator"]
    kraus: Optional[list[MatrixModel]] = None
    source_dim: Optional[int] = None
    target_dim: Optional[int] = None
    superoperator: Optional[MatrixModel] = None
    adjoint_preserving: bool = True

    def to_channel(self):
        payload: dict[str, Any] = {"kind": self.kind}
        if self.kind == "kraus":
            if not self.kraus:
                raise ValidationError("kraus channel needs a nonempty 'kraus' list")
            payload["kraus"] = [
                {"rows": m.rows, "cols": m.cols, "data": [list(p) for p in m.data]}
                for m in self.kraus
            ]
        else:
            if self.superoperator is None or self.source_dim is None or self.target_dim is None:
                raise ValidationError(
                    "superoperator channel needs source_dim, target_dim and the matrix"
                )
            payload.update(
                source_dim=self.source_dim,
                target_dim=self.target_dim,
                superoperator={
                    "rows": self.superoperator.rows,
                    "cols": self.superoperator.cols,
                    "data": [list(p) for p in self.superoperator.data],
                },
                adjoint_preserving=self.adjoint_preserving,
            )
        return payload_to_channel(payload)


class RepresentationRequest(BaseModel):
    p: MatrixModel
    q: MatrixModel


class RepresentationResponse(BaseModel):
    ambient_dim: int
    support_dim: int
    iso_to_support: MatrixModel
    whitening_root: MatrixModel
    p_op: MatrixModel
    q_op: MatrixModel


class InterpolateRequest(BaseModel):
    p: MatrixModel
    q: MatrixModel
    t: float


class MatrixResponse(BaseModel):
    matrix: MatrixModel


class GeomeanRequest(BaseModel):
    p: MatrixModel
    q: MatrixModel


class EntropyRequest(BaseModel):
    omega: MatrixModel
    nu: MatrixModel
    method: Literal["closed", "limit"] = "closed"


class EntropyDiagnostics(BaseModel):
    t_values: list[float]
    quotients: list[tuple[float, float]]
    extrapolated: list[tuple[float, float]]
    converged: bool
    diverged: bool
    tail_min: Optional[float] = None
    liminf_gap: Optional[float] = None
    liminf_flag: bool = False


class EntropyResponse(BaseModel):
    value: float | str  # float, or the string "inf"
    method: str
    diagnostics: Optional[EntropyDiagnostics] = None


class ChannelApplyRequest(BaseModel):
    channel: ChannelModel
    input: MatrixModel


class ChannelPullbackRequest(BaseModel):
    channel: ChannelModel
    omega: MatrixModel


class SchwarzCheckRequest(BaseModel):
    channel: ChannelModel
    trials: int = Field(default=1000, ge=1)
    seed: int = 0


class SchwarzCheckResponse(BaseModel):
    passed: bool
    trials: int
    min_eigenvalue: float
    witness: Optional[MatrixModel] = None


class VerifyRequest(BaseModel):
    suites: Optional[list[str]] = None
    seed: Optional[int] = None
    trials: int = Field(default=200, ge=1)
    dims: list[int] = Field(default=[2, 3, 4])
    t_grid: Optional[list[float]] = None
    tolerances: dict[str, float] = Field(default_factory=dict)


class VerifyResponse(BaseModel):
    passed: bool
    report: dict


class RecheckRequest(BaseModel):
    counterexample: dict


class RecheckResponse(BaseModel):
    suite: str
    excess: float
    reproduced: bool


app = FastAPI(
    title="formcalc",
    version=__version__,
    description=(
        "Interpolation of positive quadratic forms, relative entropy on "
        "matrix algebras, quantum channels, and randomized verification suites."
    ),
)


@app.exception_handler(RequestValidationError)
async def _validation_handler(request, exc):
    # the default handler echoes the offending input, which may contain
    # non-finite floats the strict JSON encoder refuses to emit
    errors = [
        {
            "loc": [str(part) for part in e.get("loc", ())],
            "msg": str(e.get("msg", "")),
            "type": str(e.get("type", "")),
        }
        for e in exc.errors()
    ]
    return JSONResponse(status_code=422, content={"detail": errors})


def _bad_request(exc: Exception) -> HTTPException:
    return HTTPException(status_code=400, detail=str(exc))


def _state_from(model: MatrixModel, name: str) -> State:
    M = model.to_ndarray()
    try:
        return make_state(AlgebraDescriptor.full(M.shape[0]), M, normalized=False)
    except ValidationError as exc:
        raise _bad_request(ValidationError(f"{name}: {exc}")) from exc


def _form_from(model: MatrixModel, name: str) -> QuadraticForm:
    try:
        return QuadraticForm.from_matrix(model.to_ndarray())
    except ValidationError as exc:
        raise _bad_request(ValidationError(f"{name}: {exc}")) from exc


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__, "suites": list(SUITE_ORDER)}


@app.post("/repr/build", response_model=RepresentationResponse)
def repr_build(request: RepresentationRequest) -> RepresentationResponse:
    p = _form_from(request.p, "p")
    q = _form_from(request.q, "q")
    try:
        rep = build_compatible_representation(p, q)
    except ValidationError as exc:
        raise _bad_request(exc) from exc
    return RepresentationResponse(
        ambient_dim=rep.ambient_dim,
        support_dim=rep.support_dim,
        iso_to_support=MatrixModel.from_ndarray(rep.iso_to_support),
        whitening_root=MatrixModel.from_ndarray(rep.whitening_root),
        p_op=MatrixModel.from_ndarray(rep.p_op),
        q_op=MatrixModel.from_ndarray(rep.q_op),
    )


@app.post("/interpolate", response_model=MatrixResponse)
def interpolate_forms(request: InterpolateRequest) -> MatrixResponse:
    p = _form_from(request.p, "p")
    q = _form_from(request.q, "q")
    try:
        gamma = interpolate(p, q, request.t)
    except ValidationError as exc:
        raise _bad_request(exc) from exc
    return MatrixResponse(matrix=MatrixModel.from_ndarray(gamma.matrix))


@app.post("/geomean", response_model=MatrixResponse)
def geomean_forms(request: GeomeanRequest) -> MatrixResponse:
    p = _form_from(request.p, "p")
    q = _form_from(request.q, "q")
    try:
        gm = geometric_mean(p, q)
    except ValidationError as exc:
        raise _bad_request(exc) from exc
    return MatrixResponse(matrix=MatrixModel.from_ndarray(gm.matrix))


@app.post("/entropy", response_model=EntropyResponse)
def entropy_endpoint(request: EntropyRequest) -> EntropyResponse:
    omega = _state_from(request.omega, "omega")
    nu = _state_from(request.nu, "nu")
    try:
        if request.method == "closed":
            value = relative_entropy(omega, nu)
            diagnostics = None
        else:
            value, diag = relative_entropy_limit(omega, nu, LimitSchedule())
            diagnostics = EntropyDiagnostics(
                t_values=list(diag.t_values),
                quotients=[(float(np.real(z)), float(np.imag(z))) for z in diag.quotients],
                extrapolated=[
                    (float(np.real(z)), float(np.imag(z))) for z in diag.extrapolated
                ],
                converged=diag.converged,
                diverged=diag.diverged,
                tail_min=diag.tail_min,
                liminf_gap=diag.liminf_gap,
                liminf_flag=diag.liminf_flag,
            )
    except ValidationError as exc:
        raise _bad_request(exc) from exc
    payload = "inf" if math.isinf(value) else float(value)
    return EntropyResponse(value=payload, method=request.method, diagnostics=diagnostics)


@app.post("/channel/apply", response_model=MatrixResponse)
def channel_apply_endpoint(request: ChannelApplyRequest) -> MatrixResponse:
    try:
        channel = request.channel.to_channel()
        out = channel_apply(channel, request.input.to_ndarray())
    except ValidationError as exc:
        raise _bad_request(exc) from exc
    return MatrixResponse(matrix=MatrixModel.from_ndarray(out))


@app.post("/channel/pullback", response_model=MatrixResponse)
def channel_pullback_endpoint(request: ChannelPullbackRequest) -> MatrixResponse:
    try:
        channel = request.channel.to_channel()
        omega = _state_from(request.omega, "omega")
        pulled = pullback_state(omega, channel)
    except ValidationError as exc:
        raise _bad_request(exc) from exc
    return MatrixResponse(matrix=MatrixModel.from_ndarray(pulled.density))


@app.post("/channel/check-schwarz", response_model=SchwarzCheckResponse)
def channel_check_schwarz(request: SchwarzCheckRequest) -> SchwarzCheckResponse:
    try:
        channel = request.channel.to_channel()
        report = check_schwarz(channel, trials=request.trials, seed=request.seed)
    except ValidationError as exc:
        raise _bad_request(exc) from exc
    return SchwarzCheckResponse(
        passed=report.passed,
        trials=report.trials,
        min_eigenvalue=report.min_eigenvalue,
        witness=(
            MatrixModel.from_ndarray(report.witness)
            if report.witness is not None
            else None
        ),
    )


@app.post("/verify", response_model=VerifyResponse)
def verify_endpoint(request: VerifyRequest) -> VerifyResponse:
    try:
        config = make_config(
            seed=request.seed,
            trials=request.trials,
            dims=request.dims,
            t_grid=request.t_grid if request.t_grid is not None else DEFAULT_T_GRID,
            tolerances=request.tolerances,
            suites=request.suites,
        )
        report = run_suite(config)
    except ConfigError as exc:
        raise _bad_request(exc) from exc
    return VerifyResponse(passed=report["passed"], report=report)


@app.post("/verify/recheck", response_model=RecheckResponse)
def verify_recheck(request: RecheckRequest) -> RecheckResponse:
    try:
        result = recheck_counterexample(request.counterexample)
    except (ConfigError, ValidationError) as exc:
        raise _bad_request(exc) from exc
    return RecheckResponse(**result)
