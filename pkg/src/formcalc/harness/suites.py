"""Randomized verification suites.

Each suite replays one of the core identities or inequalities as a pass/fail
experiment over deterministic per-trial RNG streams.  A failing check
serializes its full inputs so the counterexample can be re-fed through the
CLI and reproduced without the original RNG state.

Every elementary check reduces to an "excess" value: defect minus the
allowed tolerance, so excess <= 0 means pass.  A suite reports the maximal
excess seen (min_margin = -max excess) plus the first counterexample.
"""

from __future__ import annotations

import math
import os
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..algebra import (
    AlgebraDescriptor,
    State,
    form_left,
    form_right,
    injection_pullback_density,
    make_state,
    subalgebra_injection,
    vec,
)
from ..channels import (
    check_positive_unital,
    check_schwarz,
    diagonal_pinching,
    embed_tensor_identity,
    injection_channel,
    injection_form_gap,
    pullback_form_vs_state_form_gap,
    pullback_state,
    random_unital_cp,
    schwarz_defect,
    transpose_map,
)
from ..entropy import (
    gamma_states,
    relative_entropy,
    relative_entropy_limit,
)
from ..hermlin import (
    ValidationError,
    hermitian_part,
    matrix_power,
    support_projector,
)
from ..qforms import (
    QuadraticForm,
    build_compatible_representation,
    evaluate_form,
    geometric_mean,
    interpolate,
    is_dominated,
    pullback_form,
    random_dominated_form,
)
from .generators import (
    ginibre,
    random_density,
    random_dominated_pair,
    random_element,
    random_psd_form,
    rng_for,
)
from .serialization import (
    channel_to_payload,
    matrix_to_payload,
    payload_to_channel,
    payload_to_matrix,
)

ENV_SEED_VAR = "FORMCALC_SEED"
DEFAULT_SEED = 7041

SUITE_ORDER = (
    "paper_example",
    "axioms",
    "gmean",
    "prop1",
    "prop2",
    "prop3",
    "interp_identity",
    "repr_independence",
    "vn_equivalence",
    "monotonicity",
    "schwarz",
    "classical_reduction",
    "support_divergence",
)

DEFAULT_TOLERANCES = {
    "structural": 1e-12,
    "spectral": 1e-9,
    "positivity_slack": 1e-10,
    "gmean_slack": 1e-9,
    "prop12_slack": 1e-9,
    "prop3_slack": 1e-8,
    "monotonicity_slack": 1e-7,
    "limit_vs_closed": 1e-5,
    "classical": 1e-10,
    "gap_threshold": 1e-6,
}

DEFAULT_T_GRID = tuple(round(0.1 * k, 1) for k in range(11))


class ConfigError(ValidationError):
    """A SuiteConfig field is invalid; the message names the field."""


def resolve_seed(explicit=None) -> tuple[int, str]:
    """Pick the run seed: explicit argument, then the environment override,
    then the built-in default.  The source tag is echoed into reports."""
    if explicit is not None:
        return int(explicit), "explicit"
    env = os.environ.get(ENV_SEED_VAR)
    if env is not None:
        try:
            return int(env), f"env:{ENV_SEED_VAR}"
        except ValueError as exc:
            raise ConfigError(f"{ENV_SEED_VAR} must be an integer, got {env!r}") from exc
    return DEFAULT_SEED, "default"


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = DEFAULT_SEED
    trials: int = 200
    dims: tuple[int, ...] = (2, 3, 4)
    t_grid: tuple[float, ...] = DEFAULT_T_GRID
    tolerances: dict = field(default_factory=dict)
    suites: tuple[str, ...] = SUITE_ORDER
    seed_source: str = "explicit"

    def validate(self) -> "SuiteConfig":
        if not isinstance(self.trials, int) or self.trials < 1:
            raise ConfigError(f"trials must be a positive integer, got {self.trials!r}")
        if not self.dims or any(
            not isinstance(d, int) or not 1 <= d <= 8 for d in self.dims
        ):
            raise ConfigError(f"dims must be integers in [1, 8], got {self.dims!r}")
        if not self.t_grid or any(not 0.0 <= t <= 1.0 for t in self.t_grid):
            raise ConfigError(f"t_grid values must lie in [0, 1], got {self.t_grid!r}")
        unknown = [s for s in self.suites if s not in SUITE_ORDER]
        if unknown:
            raise ConfigError(f"unknown suites: {unknown}")
        if not self.suites:
            raise ConfigError("suites must not be empty")
        for key, value in self.tolerances.items():
            if key not in DEFAULT_TOLERANCES:
                raise ConfigError(f"unknown tolerance {key!r}")
            if not isinstance(value, (int, float)) or value <= 0:
                raise ConfigError(f"tolerance {key!r} must be positive, got {value!r}")
        return self

    def tol(self, name: str) -> float:
        return float(self.tolerances.get(name, DEFAULT_TOLERANCES[name]))

    def effective_tolerances(self) -> dict:
        out = dict(DEFAULT_TOLERANCES)
        out.update({k: float(v) for k, v in self.tolerances.items()})
        return out

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "seed_source": self.seed_source,
            "trials": self.trials,
            "dims": list(self.dims),
            "t_grid": list(self.t_grid),
            "tolerances": self.effective_tolerances(),
            "suites": list(self.suites),
        }


def make_config(
    seed=None,
    trials: int = 200,
    dims=(2, 3, 4),
    t_grid=DEFAULT_T_GRID,
    tolerances=None,
    suites=None,
) -> SuiteConfig:
    seed_value, source = resolve_seed(seed)
    if suites is None:
        chosen = SUITE_ORDER
    else:
        chosen = tuple(s for s in SUITE_ORDER if s in set(suites))
        unknown = [s for s in suites if s not in SUITE_ORDER]
        if unknown:
            raise ConfigError(f"unknown suites: {unknown}")
    cfg = SuiteConfig(
        seed=seed_value,
        trials=int(trials),
        dims=tuple(int(d) for d in dims),
        t_grid=tuple(float(t) for t in t_grid),
        tolerances=dict(tolerances or {}),
        suites=chosen,
        seed_source=source,
    )
    return cfg.validate()


class _Accumulator:
    """Collects excess values (defect minus allowance) and the first
    counterexample payload."""

    def __init__(self, suite: str):
        self.suite = suite
        self.max_excess = -math.inf
        self.checks = 0
        self.counterexample = None

    def add(self, excess: float, payload: Callable[[], dict] | None = None):
        self.checks += 1
        excess = float(excess)
        if excess > self.max_excess:
            self.max_excess = excess
        if excess > 0 and self.counterexample is None and payload is not None:
            data = payload()
            data["suite"] = self.suite
            data["excess"] = excess
            self.counterexample = data

    def result(self, trials: int) -> dict:
        passed = self.max_excess <= 0
        return {
            "passed": bool(passed),
            "trials": int(trials),
            "checks": int(self.checks),
            "min_margin": -self.max_excess if self.checks else math.inf,
            "max_violation": max(self.max_excess, 0.0) if self.checks else 0.0,
            "counterexample": self.counterexample,
        }


def _mat(M) -> dict:
    return matrix_to_payload(M)


def _min_eig(M) -> float:
    return float(np.linalg.eigvalsh(hermitian_part(M))[0])


def _dim_for(cfg: SuiteConfig, trial: int, cap: int = 8) -> int:
    d = cfg.dims[trial % len(cfg.dims)]
    return min(d, cap)


# ---------------------------------------------------------------------------
# fixed 2x2 worked example

P_HAT = np.array([[2.0, 1.0], [1.0, 2.0]], dtype=complex)
Q_HAT = np.array([[2.0, 1.0j], [-1.0j, 2.0]], dtype=complex)


def _suite_paper_example(cfg: SuiteConfig) -> dict:
    acc = _Accumulator("paper_example")
    tol = cfg.tol("structural")

    def payload(check):
        return lambda: {
            "check": check,
            "p_hat": _mat(P_HAT),
            "q_hat": _mat(Q_HAT),
            "tolerance": tol,
        }

    comm = P_HAT @ Q_HAT - Q_HAT @ P_HAT
    target = 2j * np.diag([-1.0, 1.0])
    acc.add(float(np.linalg.norm(comm - target)) - tol, payload("commutator"))

    eigs = np.linalg.eigvalsh(P_HAT + Q_HAT)
    expected = np.array([4.0 - np.sqrt(2.0), 4.0 + np.sqrt(2.0)])
    acc.add(float(np.abs(eigs - expected).max()) - tol, payload("sum_eigenvalues"))

    S_inv = np.linalg.inv(P_HAT + Q_HAT)
    P = S_inv @ P_HAT
    Q = S_inv @ Q_HAT
    acc.add(float(np.linalg.norm(P + Q - np.eye(2))) - tol, payload("p_plus_q"))
    acc.add(float(np.linalg.norm(P @ Q - Q @ P)) - tol, payload("pq_commute"))

    p = QuadraticForm.from_matrix(P_HAT)
    q = QuadraticForm.from_matrix(Q_HAT)
    rep = build_compatible_representation(p, q)
    acc.add(-1.0 if rep.support_dim == 2 else 1.0, payload("support_dim"))
    acc.add(
        float(np.linalg.norm(rep.p_op + rep.q_op - np.eye(rep.support_dim))) - tol,
        payload("op_sum"),
    )
    acc.add(
        float(np.linalg.norm(rep.p_op @ rep.q_op - rep.q_op @ rep.p_op)) - tol,
        payload("op_commute"),
    )

    # the representation must reproduce the form values
    basis = [np.array([1.0, 0.0]), np.array([0.0, 1.0]), np.array([1.0, 1.0j]) / 2]
    worst = 0.0
    for a in basis:
        za = rep.quotient_coords(a)
        for b in basis:
            zb = rep.quotient_coords(b)
            direct = complex(a.conj() @ P_HAT @ b)
            via_rep = complex(za.conj() @ rep.p_op @ zb)
            worst = max(worst, abs(direct - via_rep))
    acc.add(worst - 1e-10, payload("form_reproduction"))

    # geometric mean against an in-place joint-diagonalization computation
    gm = geometric_mean(p, q).matrix
    w, V = np.linalg.eigh(rep.p_op)
    w = np.clip(w, 0.0, 1.0)
    core = (V * np.sqrt(w * (1.0 - w))) @ V.conj().T
    half = rep.iso_to_support @ rep.whitening_root
    oracle = half @ core @ half.conj().T
    acc.add(float(np.linalg.norm(gm - oracle)) - tol, payload("gmean_oracle"))
    acc.add(-_min_eig(gm) - cfg.tol("positivity_slack"), payload("gmean_psd"))

    return acc.result(trials=1)


def _recheck_paper_example(payload: dict) -> float:
    return _suite_paper_example(make_config(seed=0, trials=1))["max_violation"]


# ---------------------------------------------------------------------------
# state axioms and superoperator forms

SUITE_AXIOMS_SAMPLES = 4


def _suite_axioms(cfg: SuiteConfig) -> dict:
    acc = _Accumulator("axioms")
    tol = cfg.tol("structural")
    slack = cfg.tol("positivity_slack")
    for trial in range(cfg.trials):
        rng = rng_for(cfg.seed, SUITE_ORDER.index("axioms"), trial)
        d = _dim_for(cfg, trial)
        rho = random_density(d, seed=rng)
        sig = random_density(d, seed=rng)
        omega = make_state(AlgebraDescriptor.full(d), rho)
        nu = make_state(AlgebraDescriptor.full(d), sig)

        def payload(check, a=None, b=None):
            extra = {}
            if a is not None:
                extra["a"] = _mat(a)
            if b is not None:
                extra["b"] = _mat(b)
            return lambda: {
                "check": check,
                "omega": _mat(rho),
                "nu": _mat(sig),
                "tolerance": tol,
                **extra,
            }

        acc.add(abs(np.trace(rho) - 1.0) - tol, payload("normalization"))
        fr = form_right(omega)
        fl = form_left(nu)
        for _ in range(SUITE_AXIOMS_SAMPLES):
            a = random_element(rng, d)
            b = random_element(rng, d)
            lam = complex(*rng.standard_normal(2))
            mu = complex(*rng.standard_normal(2))
            lin = np.trace(rho @ (lam * a + mu * b)) - lam * np.trace(
                rho @ a
            ) - mu * np.trace(rho @ b)
            acc.add(abs(lin) - tol, payload("linearity", a, b))
            acc.add(
                -float(np.trace(rho @ (a.conj().T @ a)).real) - slack,
                payload("positivity", a),
            )
            conj_defect = abs(
                np.trace(rho @ a.conj().T) - np.conj(np.trace(rho @ a))
            )
            acc.add(conj_defect - tol, payload("conjugation", a))
            acc.add(
                -evaluate_form(fr, vec(a), vec(a)).real - slack,
                payload("form_right_positive", a),
            )
            acc.add(
                -evaluate_form(fl, vec(a), vec(a)).real - slack,
                payload("form_left_positive", a),
            )
        L = form_right(omega).matrix
        R = form_left(nu).matrix
        acc.add(float(np.linalg.norm(L @ R - R @ L)) - tol, payload("lr_commute"))

        # commutative reduction: on the diagonal algebra itself the right and
        # left forms coincide (elements commute), so compare them restricted
        # to the intrinsic coordinates
        diag = np.sort(rng.uniform(0.1, 1.0, d))
        diag = diag / diag.sum()
        comm = AlgebraDescriptor.commutative(d)
        comm_state = make_state(comm, np.diag(diag).astype(complex))
        J = subalgebra_injection(comm, d, tuple(range(d)))
        right = J.conj().T @ form_right(comm_state).matrix @ J
        left = J.conj().T @ form_left(comm_state).matrix @ J
        acc.add(
            float(np.linalg.norm(right - left)) - tol,
            lambda: {
                "check": "commutative_forms",
                "omega": _mat(np.diag(diag)),
                "nu": _mat(np.diag(diag)),
                "tolerance": tol,
            },
        )
    return acc.result(cfg.trials)


def _recheck_axioms(payload: dict) -> float:
    tol = float(payload["tolerance"])
    rho = payload_to_matrix(payload["omega"])
    check = payload["check"]
    a = payload_to_matrix(payload["a"]) if "a" in payload else None
    if check == "normalization":
        return abs(np.trace(rho) - 1.0) - tol
    if check == "positivity":
        return -float(np.trace(rho @ (a.conj().T @ a)).real) - tol
    if check == "conjugation":
        return abs(np.trace(rho @ a.conj().T) - np.conj(np.trace(rho @ a))) - tol
    if check in ("form_right_positive", "form_left_positive"):
        d = rho.shape[0]
        state = make_state(AlgebraDescriptor.full(d), rho)
        form = form_right(state) if check == "form_right_positive" else form_left(state)
        return -evaluate_form(form, vec(a), vec(a)).real - tol
    if check == "lr_commute":
        sig = payload_to_matrix(payload["nu"])
        d = rho.shape[0]
        L = form_right(make_state(AlgebraDescriptor.full(d), rho)).matrix
        R = form_left(make_state(AlgebraDescriptor.full(d), sig)).matrix
        return float(np.linalg.norm(L @ R - R @ L)) - tol
    if check == "commutative_forms":
        d = rho.shape[0]
        comm = AlgebraDescriptor.commutative(d)
        state = make_state(comm, rho)
        J = subalgebra_injection(comm, d, tuple(range(d)))
        right = J.conj().T @ form_right(state).matrix @ J
        left = J.conj().T @ form_left(state).matrix @ J
        return float(np.linalg.norm(right - left)) - tol
    if check == "linearity":
        # linearity of the trace pairing is exact; re-run is the same computation
        b = payload_to_matrix(payload["b"])
        lin = np.trace(rho @ (a + b)) - np.trace(rho @ a) - np.trace(rho @ b)
        return abs(lin) - tol
    raise ValidationError(f"unknown axioms check {check!r}")


# ---------------------------------------------------------------------------
# geometric-mean maximality

GMEAN_VECTORS = 50


def _suite_gmean(cfg: SuiteConfig) -> dict:
    acc = _Accumulator("gmean")
    slack = cfg.tol("gmean_slack")
    for trial in range(cfg.trials):
        rng = rng_for(cfg.seed, SUITE_ORDER.index("gmean"), trial)
        d = _dim_for(cfg, trial)
        full_rank = trial % 3 != 0
        rank = d if full_rank else max(1, d - 1)
        p = random_psd_form(rng, d, rank)
        q = random_psd_form(rng, d)
        gm = geometric_mean(p, q)
        cert = is_dominated(gm, p, q, tol=slack)
        acc.add(
            cert.norm - (1.0 + slack),
            lambda: {
                "check": "certificate",
                "p": _mat(p.matrix),
                "q": _mat(q.matrix),
                "tolerance": slack,
            },
        )
        acc.add(
            -1.0 if cert.dominated else 1.0,
            lambda: {
                "check": "certificate",
                "p": _mat(p.matrix),
                "q": _mat(q.matrix),
                "tolerance": slack,
            },
        )
        scale = rng.uniform(0.2, 1.0)
        # a Hermitian dominated form must have its range inside both
        # supports, which a symmetrization cannot satisfy off full rank
        r = random_dominated_form(p, q, scale, seed=rng, hermitian=full_rank)
        cert_r = is_dominated(r, p, q, tol=slack)
        acc.add(
            -1.0 if cert_r.dominated else 1.0,
            lambda: {
                "check": "generator_certified",
                "p": _mat(p.matrix),
                "q": _mat(q.matrix),
                "r": _mat(r.matrix),
                "tolerance": slack,
            },
        )
        if not full_rank:
            continue
        for _ in range(GMEAN_VECTORS):
            a = rng.standard_normal(d) + 1j * rng.standard_normal(d)
            defect = evaluate_form(r, a, a).real - evaluate_form(gm, a, a).real
            acc.add(
                defect - slack,
                lambda a=a: {
                    "check": "bound",
                    "p": _mat(p.matrix),
                    "q": _mat(q.matrix),
                    "r": _mat(r.matrix),
                    "vector": _mat(a.reshape(-1, 1)),
                    "tolerance": slack,
                },
            )
    return acc.result(cfg.trials)


def _recheck_gmean(payload: dict) -> float:
    from ..qforms import SesquilinearForm

    tol = float(payload["tolerance"])
    p = QuadraticForm.from_matrix(payload_to_matrix(payload["p"]))
    q = QuadraticForm.from_matrix(payload_to_matrix(payload["q"]))
    check = payload["check"]
    if check == "certificate":
        cert = is_dominated(geometric_mean(p, q), p, q, tol=tol)
        return cert.norm - (1.0 + tol) if cert.dominated else 1.0
    r_form = SesquilinearForm(payload_to_matrix(payload["r"]))
    if check == "generator_certified":
        return -1.0 if is_dominated(r_form, p, q, tol=tol).dominated else 1.0
    if check == "bound":
        a = payload_to_matrix(payload["vector"]).reshape(-1)
        gm = geometric_mean(p, q)
        return (
            evaluate_form(r_form, a, a).real - evaluate_form(gm, a, a).real - tol
        )
    raise ValidationError(f"unknown gmean check {check!r}")


# ---------------------------------------------------------------------------
# monotonicity of the mean / interpolation in its arguments

def _prop_payload(p_small, p, q_small, q, t, tol):
    return {
        "p_small": _mat(p_small.matrix),
        "p": _mat(p.matrix),
        "q_small": _mat(q_small.matrix),
        "q": _mat(q.matrix),
        "t": t,
        "tolerance": tol,
    }


def _suite_prop1(cfg: SuiteConfig) -> dict:
    acc = _Accumulator("prop1")
    slack = cfg.tol("prop12_slack")
    for trial in range(cfg.trials):
        rng = rng_for(cfg.seed, SUITE_ORDER.index("prop1"), trial)
        d = _dim_for(cfg, trial)
        p_small, p = random_dominated_pair(rng, d)
        q_small, q = random_dominated_pair(rng, d)
        gm_small = geometric_mean(p_small, q_small)
        gm = geometric_mean(p, q)
        excess = -_min_eig(gm.matrix - gm_small.matrix) - slack
        acc.add(
            excess,
            lambda: _prop_payload(p_small, p, q_small, q, 0.5, slack),
        )
    return acc.result(cfg.trials)


def _suite_prop2(cfg: SuiteConfig) -> dict:
    acc = _Accumulator("prop2")
    slack = cfg.tol("prop12_slack")
    for trial in range(cfg.trials):
        rng = rng_for(cfg.seed, SUITE_ORDER.index("prop2"), trial)
        d = _dim_for(cfg, trial)
        p_small, p = random_dominated_pair(rng, d)
        q_small, q = random_dominated_pair(rng, d)
        for t in cfg.t_grid:
            g_small = interpolate(p_small, q_small, t)
            g = interpolate(p, q, t)
            excess = -_min_eig(g.matrix - g_small.matrix) - slack
            acc.add(
                excess,
                lambda t=t: _prop_payload(p_small, p, q_small, q, t, slack),
            )
    return acc.result(cfg.trials)


def _recheck_prop12(payload: dict) -> float:
    tol = float(payload["tolerance"])
    p_small = QuadraticForm.from_matrix(payload_to_matrix(payload["p_small"]))
    p = QuadraticForm.from_matrix(payload_to_matrix(payload["p"]))
    q_small = QuadraticForm.from_matrix(payload_to_matrix(payload["q_small"]))
    q = QuadraticForm.from_matrix(payload_to_matrix(payload["q"]))
    t = float(payload["t"])
    g_small = interpolate(p_small, q_small, t)
    g = interpolate(p, q, t)
    return -_min_eig(g.matrix - g_small.matrix) - tol


def _suite_prop3(cfg: SuiteConfig) -> dict:
    acc = _Accumulator("prop3")
    slack = cfg.tol("prop3_slack")
    for trial in range(cfg.trials):
        rng = rng_for(cfg.seed, SUITE_ORDER.index("prop3"), trial)
        n = _dim_for(cfg, trial)
        n_prime = _dim_for(cfg, trial + 1)
        p = random_psd_form(rng, n)
        q = random_psd_form(rng, n)
        phi = ginibre(rng, n, n_prime)
        norm = float(np.linalg.norm(phi, ord=2))
        if norm > 0:
            phi = phi / norm
        for t in cfg.t_grid:
            lhs = pullback_form(interpolate(p, q, t), phi)
            rhs = interpolate(pullback_form(p, phi), pullback_form(q, phi), t)
            excess = -_min_eig(rhs.matrix - lhs.matrix) - slack
            acc.add(
                excess,
                lambda t=t: {
                    "p": _mat(p.matrix),
                    "q": _mat(q.matrix),
                    "map": _mat(phi),
                    "t": t,
                    "tolerance": slack,
                },
            )
    return acc.result(cfg.trials)


def _recheck_prop3(payload: dict) -> float:
    tol = float(payload["tolerance"])
    p = QuadraticForm.from_matrix(payload_to_matrix(payload["p"]))
    q = QuadraticForm.from_matrix(payload_to_matrix(payload["q"]))
    phi = payload_to_matrix(payload["map"])
    t = float(payload["t"])
    lhs = pullback_form(interpolate(p, q, t), phi)
    rhs = interpolate(pullback_form(p, phi), pullback_form(q, phi), t)
    return -_min_eig(rhs.matrix - lhs.matrix) - tol


# ---------------------------------------------------------------------------
# interpolation composition identity

def _suite_interp_identity(cfg: SuiteConfig) -> dict:
    acc = _Accumulator("interp_identity")
    tol = cfg.tol("spectral")
    for trial in range(cfg.trials):
        rng = rng_for(cfg.seed, SUITE_ORDER.index("interp_identity"), trial)
        d = _dim_for(cfg, trial)
        p = random_psd_form(rng, d)
        q = random_psd_form(rng, d)
        t, t1, t2 = rng.uniform(0.0, 1.0, 3)
        inner1 = interpolate(p, q, t1)
        inner2 = interpolate(p, q, t2)
        lhs = interpolate(inner1, inner2, t)
        rhs = interpolate(p, q, t1 * (1.0 - t) + t2 * t)
        defect = float(np.linalg.norm(lhs.matrix - rhs.matrix))
        acc.add(
            defect - tol,
            lambda: {
                "p": _mat(p.matrix),
                "q": _mat(q.matrix),
                "t": float(t),
                "t1": float(t1),
                "t2": float(t2),
                "tolerance": tol,
            },
        )
    return acc.result(cfg.trials)


def _recheck_interp_identity(payload: dict) -> float:
    tol = float(payload["tolerance"])
    p = QuadraticForm.from_matrix(payload_to_matrix(payload["p"]))
    q = QuadraticForm.from_matrix(payload_to_matrix(payload["q"]))
    t, t1, t2 = float(payload["t"]), float(payload["t1"]), float(payload["t2"])
    lhs = interpolate(interpolate(p, q, t1), interpolate(p, q, t2), t)
    rhs = interpolate(p, q, t1 * (1.0 - t) + t2 * t)
    return float(np.linalg.norm(lhs.matrix - rhs.matrix)) - tol


# ---------------------------------------------------------------------------
# quotient-space route vs closed-form route

def _closed_form_matrix(rho, sig, t):
    return np.kron(matrix_power(sig, t).T, matrix_power(rho, 1.0 - t))


def _suite_repr_independence(cfg: SuiteConfig) -> dict:
    acc = _Accumulator("repr_independence")
    tol = cfg.tol("spectral")
    dims = [d for d in cfg.dims if d <= 3] or [2, 3]
    for trial in range(cfg.trials):
        rng = rng_for(cfg.seed, SUITE_ORDER.index("repr_independence"), trial)
        d = dims[trial % len(dims)]
        rank_o = d if trial % 4 else max(1, d - 1)
        rank_n = d if trial % 5 else max(1, d - 1)
        rho = random_density(d, rank_o, seed=rng)
        sig = random_density(d, rank_n, seed=rng)
        omega = State(AlgebraDescriptor.full(d), rho)
        nu = State(AlgebraDescriptor.full(d), sig)
        p = form_right(omega)
        q = form_left(nu)
        for t in cfg.t_grid:
            gns = interpolate(p, q, t).matrix
            closed = _closed_form_matrix(rho, sig, t)
            defect = float(np.linalg.norm(gns - closed))
            acc.add(
                defect - tol,
                lambda t=t: {
                    "omega": _mat(rho),
                    "nu": _mat(sig),
                    "t": t,
                    "tolerance": tol,
                },
            )
            # spot value against the trace expression on random elements
            a = random_element(rng, d)
            b = random_element(rng, d)
            via_states = gamma_states(omega, nu, t, a, b)
            via_form = evaluate_form(interpolate(p, q, t), vec(a), vec(b))
            acc.add(
                abs(via_states - via_form) - tol,
                lambda t=t: {
                    "omega": _mat(rho),
                    "nu": _mat(sig),
                    "t": t,
                    "tolerance": tol,
                },
            )
    return acc.result(cfg.trials)


def _recheck_repr_independence(payload: dict) -> float:
    tol = float(payload["tolerance"])
    rho = payload_to_matrix(payload["omega"])
    sig = payload_to_matrix(payload["nu"])
    t = float(payload["t"])
    d = rho.shape[0]
    p = form_right(State(AlgebraDescriptor.full(d), rho))
    q = form_left(State(AlgebraDescriptor.full(d), sig))
    gns = interpolate(p, q, t).matrix
    return float(np.linalg.norm(gns - _closed_form_matrix(rho, sig, t))) - tol


# ---------------------------------------------------------------------------
# limit estimator vs closed form

def _suite_vn_equivalence(cfg: SuiteConfig) -> dict:
    acc = _Accumulator("vn_equivalence")
    tol = cfg.tol("limit_vs_closed")
    dims = [min(d, 6) for d in cfg.dims]
    for trial in range(cfg.trials):
        rng = rng_for(cfg.seed, SUITE_ORDER.index("vn_equivalence"), trial)
        d = dims[trial % len(dims)]
        rho = random_density(d, seed=rng)
        sig = random_density(d, seed=rng)
        omega = State(AlgebraDescriptor.full(d), rho)
        nu = State(AlgebraDescriptor.full(d), sig)
        closed = relative_entropy(omega, nu)
        est, diag = relative_entropy_limit(omega, nu)
        defect = abs(est - closed) if math.isfinite(est) else math.inf
        acc.add(
            defect - tol,
            lambda: {
                "omega": _mat(rho),
                "nu": _mat(sig),
                "tolerance": tol,
            },
        )
    return acc.result(cfg.trials)


def _recheck_vn_equivalence(payload: dict) -> float:
    tol = float(payload["tolerance"])
    rho = payload_to_matrix(payload["omega"])
    sig = payload_to_matrix(payload["nu"])
    d = rho.shape[0]
    omega = State(AlgebraDescriptor.full(d), rho)
    nu = State(AlgebraDescriptor.full(d), sig)
    closed = relative_entropy(omega, nu)
    est, _ = relative_entropy_limit(omega, nu)
    return (abs(est - closed) if math.isfinite(est) else math.inf) - tol


# ---------------------------------------------------------------------------
# monotonicity under unital Schwarz maps

_INJECTION_VARIANTS = (
    {"block_dims": (2,), "assignment": (0, 0)},  # doubling M_2 -> M_4
    {"block_dims": (1, 1), "assignment": (0, 1)},  # diagonal C^2 -> M_2
    {"block_dims": (2, 1), "assignment": (0, 1)},  # M_2 + C -> M_3
)


def _monotonicity_trial_channel(cfg: SuiteConfig, trial: int, rng):
    """Cycle through the channel zoo; returns (description, target_dim,
    pullback function mapping a density to (sub_algebra, density))."""
    kind = trial % 4
    if kind == 0:
        n = min(_dim_for(cfg, trial), 5)
        m = min(_dim_for(cfg, trial // 2 + 1), 5)
        r = 1 + trial % 6
        r = max(r, -(-n // m))  # need m * r >= n for the isometry
        channel = random_unital_cp(m, n, r, rng)
        desc = channel_to_payload(channel)
        return desc, n, lambda rho: (
            AlgebraDescriptor.full(m),
            pullback_state(State(AlgebraDescriptor.full(n), rho), channel).density,
        )
    if kind == 1:
        n = min(_dim_for(cfg, trial), 5)
        channel = diagonal_pinching(n)
        desc = channel_to_payload(channel)
        return desc, n, lambda rho: (
            AlgebraDescriptor.full(n),
            pullback_state(State(AlgebraDescriptor.full(n), rho), channel).density,
        )
    if kind == 2:
        variant = _INJECTION_VARIANTS[(trial // 4) % len(_INJECTION_VARIANTS)]
        sub = AlgebraDescriptor(variant["block_dims"])
        assignment = variant["assignment"]
        parent = sum(sub.block_dims[k] for k in assignment)
        desc = {
            "kind": "injection",
            "block_dims": list(sub.block_dims),
            "parent_dim": parent,
            "assignment": list(assignment),
        }
        return desc, parent, lambda rho: (
            sub,
            injection_pullback_density(sub, parent, assignment, rho),
        )
    m = min(_dim_for(cfg, trial), 4)
    k = 2
    channel = embed_tensor_identity(m, k)
    desc = channel_to_payload(channel)
    return desc, m * k, lambda rho: (
        AlgebraDescriptor.full(m),
        pullback_state(State(AlgebraDescriptor.full(m * k), rho), channel).density,
    )


def _entropy_drop(desc, rho, sig) -> float:
    """S[omega, nu] - S[omega_Phi, nu_Phi] for a serialized channel."""
    n = rho.shape[0]
    omega = State(AlgebraDescriptor.full(n), rho)
    nu = State(AlgebraDescriptor.full(n), sig)
    s_before = relative_entropy(omega, nu)
    if desc.get("kind") == "injection":
        sub = AlgebraDescriptor(tuple(desc["block_dims"]))
        parent = int(desc["parent_dim"])
        assignment = tuple(desc["assignment"])
        rho_p = injection_pullback_density(sub, parent, assignment, rho)
        sig_p = injection_pullback_density(sub, parent, assignment, sig)
        s_after = relative_entropy(State(sub, rho_p), State(sub, sig_p))
    else:
        channel = payload_to_channel(desc)
        s_after = relative_entropy(
            pullback_state(omega, channel), pullback_state(nu, channel)
        )
    return s_before - s_after


def _suite_monotonicity(cfg: SuiteConfig) -> dict:
    acc = _Accumulator("monotonicity")
    slack = cfg.tol("monotonicity_slack")
    for trial in range(cfg.trials):
        rng = rng_for(cfg.seed, SUITE_ORDER.index("monotonicity"), trial)
        desc, n, _pull = _monotonicity_trial_channel(cfg, trial, rng)
        rho = random_density(n, seed=rng)
        sig = random_density(n, seed=rng)
        drop = _entropy_drop(desc, rho, sig)
        acc.add(
            -drop - slack,
            lambda: {
                "omega": _mat(rho),
                "nu": _mat(sig),
                "channel": desc,
                "tolerance": slack,
            },
        )
    return acc.result(cfg.trials)


def _recheck_monotonicity(payload: dict) -> float:
    tol = float(payload["tolerance"])
    rho = payload_to_matrix(payload["omega"])
    sig = payload_to_matrix(payload["nu"])
    return -_entropy_drop(payload["channel"], rho, sig) - tol


# ---------------------------------------------------------------------------
# Schwarz boundary: transpose fails, CP channels pass, homomorphism equality

def _suite_schwarz(cfg: SuiteConfig) -> dict:
    acc = _Accumulator("schwarz")
    structural = cfg.tol("structural")
    gap_threshold = cfg.tol("gap_threshold")

    # transpose: positive and unital, yet not Schwarz, with witness E12
    tr = transpose_map(2)
    pos = check_positive_unital(tr, trials=200, seed=cfg.seed)
    acc.add(
        -1.0 if (pos.unital and pos.positive) else 1.0,
        lambda: {"check": "transpose_positive_unital", "tolerance": 0.5},
    )
    rep = check_schwarz(tr, trials=10, seed=cfg.seed)
    e12 = np.zeros((2, 2), dtype=complex)
    e12[0, 1] = 1.0
    found = (
        not rep.passed
        and rep.witness is not None
        and np.allclose(rep.witness, e12)
        and abs(rep.min_eigenvalue + 1.0) < 1e-9
    )
    acc.add(
        -1.0 if found else 1.0,
        lambda: {
            "check": "transpose_witness",
            "channel": channel_to_payload(tr),
            "witness": _mat(e12),
            "tolerance": 0.5,
        },
    )

    # generated unital CP channels must pass
    n_channels = 6
    samples = max(1, cfg.trials)
    for c_idx in range(n_channels):
        rng = rng_for(cfg.seed, SUITE_ORDER.index("schwarz"), c_idx)
        n = min(cfg.dims[c_idx % len(cfg.dims)], 5)
        m = min(cfg.dims[(c_idx + 1) % len(cfg.dims)], 5)
        r = 1 + c_idx % 6
        r = max(r, -(-n // m))
        channel = random_unital_cp(m, n, r, rng)
        rep = check_schwarz(channel, trials=samples, seed=rng)
        acc.add(
            -1.0 if rep.passed else 1.0,
            lambda channel=channel, rep=rep: {
                "check": "cp_schwarz",
                "channel": channel_to_payload(channel),
                "witness": _mat(rep.witness) if rep.witness is not None else None,
                "tolerance": 0.5,
            },
        )
        # Schwarz implies positive on the same kind of samples
        pos = check_positive_unital(channel, trials=50, seed=rng)
        acc.add(
            -1.0 if pos.positive else 1.0,
            lambda channel=channel: {
                "check": "cp_positive",
                "channel": channel_to_payload(channel),
                "tolerance": 0.5,
            },
        )

    # homomorphisms: Schwarz defect is identically zero and the two right
    # forms agree; generic channels keep a strict gap but stay Loewner-ordered
    rng = rng_for(cfg.seed, SUITE_ORDER.index("schwarz"), 999)
    doubling = injection_channel(AlgebraDescriptor.full(2), 4, (0, 0))
    for _ in range(20):
        a = random_element(rng, 2)
        diff, _ = schwarz_defect(doubling, a)
        acc.add(
            float(np.linalg.norm(diff)) - structural,
            lambda a=a: {
                "check": "homomorphism_defect",
                "channel": channel_to_payload(doubling),
                "witness": _mat(a),
                "tolerance": structural,
            },
        )
    rho4 = random_density(4, seed=rng)
    omega4 = State(AlgebraDescriptor.full(4), rho4)
    gap_hom = pullback_form_vs_state_form_gap(doubling, omega4)
    acc.add(
        gap_hom.frobenius_gap - structural,
        lambda: {
            "check": "homomorphism_gap",
            "channel": channel_to_payload(doubling),
            "omega": _mat(rho4),
            "tolerance": structural,
        },
    )
    # multi-block injection compared on the intrinsic coordinates
    for variant in _INJECTION_VARIANTS[1:]:
        sub = AlgebraDescriptor(variant["block_dims"])
        parent = sum(sub.block_dims[k] for k in variant["assignment"])
        rho_p = random_density(parent, seed=rng)
        gap = injection_form_gap(
            sub, parent, variant["assignment"], State(AlgebraDescriptor.full(parent), rho_p)
        )
        acc.add(
            gap - structural,
            lambda variant=variant, rho_p=rho_p: {
                "check": "injection_intrinsic_gap",
                "channel": {
                    "kind": "injection",
                    "block_dims": list(variant["block_dims"]),
                    "parent_dim": int(sum(variant["block_dims"][k] for k in variant["assignment"])),
                    "assignment": list(variant["assignment"]),
                },
                "omega": _mat(rho_p),
                "tolerance": structural,
            },
        )
    for d in (2, 3):
        rng_c = rng_for(cfg.seed, SUITE_ORDER.index("schwarz"), 1000 + d)
        channel = random_unital_cp(d, d, 3, rng_c)
        rho = random_density(d, seed=rng_c)
        gap = pullback_form_vs_state_form_gap(
            channel, State(AlgebraDescriptor.full(d), rho)
        )
        acc.add(
            (gap_threshold - gap.frobenius_gap),
            lambda channel=channel, rho=rho: {
                "check": "generic_gap_strict",
                "channel": channel_to_payload(channel),
                "omega": _mat(rho),
                "tolerance": gap_threshold,
            },
        )
        acc.add(
            -1.0 if gap.loewner_holds else 1.0,
            lambda channel=channel, rho=rho: {
                "check": "generic_gap_loewner",
                "channel": channel_to_payload(channel),
                "omega": _mat(rho),
                "tolerance": 0.5,
            },
        )
    return acc.result(cfg.trials)


def _recheck_schwarz(payload: dict) -> float:
    check = payload["check"]
    tol = float(payload["tolerance"])
    if check in ("transpose_positive_unital", "transpose_witness"):
        tr = transpose_map(2)
        if check == "transpose_positive_unital":
            pos = check_positive_unital(tr, trials=200, seed=0)
            return -1.0 if (pos.unital and pos.positive) else 1.0
        witness = payload_to_matrix(payload["witness"])
        _, lam = schwarz_defect(tr, witness)
        return -1.0 if lam < -0.5 else 1.0
    channel_desc = payload["channel"]
    if check == "injection_intrinsic_gap":
        sub = AlgebraDescriptor(tuple(channel_desc["block_dims"]))
        parent = int(channel_desc["parent_dim"])
        rho = payload_to_matrix(payload["omega"])
        gap = injection_form_gap(
            sub, parent, tuple(channel_desc["assignment"]),
            State(AlgebraDescriptor.full(parent), rho),
        )
        return gap - tol
    channel = payload_to_channel(channel_desc)
    if check == "cp_schwarz":
        witness = payload.get("witness")
        if witness is not None:
            _, lam = schwarz_defect(channel, payload_to_matrix(witness))
            return -lam - 1e-10
        return -1.0
    if check == "cp_positive":
        pos = check_positive_unital(channel, trials=50, seed=0)
        return -1.0 if pos.positive else 1.0
    if check == "homomorphism_defect":
        a = payload_to_matrix(payload["witness"])
        diff, _ = schwarz_defect(channel, a)
        return float(np.linalg.norm(diff)) - tol
    if check in ("homomorphism_gap", "generic_gap_strict", "generic_gap_loewner"):
        rho = payload_to_matrix(payload["omega"])
        n = channel.target_dim
        gap = pullback_form_vs_state_form_gap(
            channel, State(AlgebraDescriptor.full(n), rho)
        )
        if check == "homomorphism_gap":
            return gap.frobenius_gap - tol
        if check == "generic_gap_strict":
            return tol - gap.frobenius_gap
        return -1.0 if gap.loewner_holds else 1.0
    raise ValidationError(f"unknown schwarz check {check!r}")


# ---------------------------------------------------------------------------
# classical reduction

PINCH_OMEGA = np.array([[0.5, 0.2], [0.2, 0.5]], dtype=complex)
PINCH_NU = np.eye(2, dtype=complex) / 2.0


def _suite_classical_reduction(cfg: SuiteConfig) -> dict:
    acc = _Accumulator("classical_reduction")
    tol = cfg.tol("classical")
    for trial in range(cfg.trials):
        rng = rng_for(cfg.seed, SUITE_ORDER.index("classical_reduction"), trial)
        d = _dim_for(cfg, trial)
        pvec = rng.uniform(0.05, 1.0, d)
        pvec /= pvec.sum()
        qvec = rng.uniform(0.05, 1.0, d)
        qvec /= qvec.sum()
        omega = State(AlgebraDescriptor.full(d), np.diag(pvec).astype(complex))
        nu = State(AlgebraDescriptor.full(d), np.diag(qvec).astype(complex))
        kl = float(np.sum(pvec * (np.log(pvec) - np.log(qvec))))
        defect = abs(relative_entropy(omega, nu) - kl)
        acc.add(
            defect - tol,
            lambda: {
                "check": "kl",
                "omega": _mat(np.diag(pvec)),
                "nu": _mat(np.diag(qvec)),
                "tolerance": tol,
            },
        )

    # fixed coherent state against the eigenvalue-formula value, then pinched
    omega = State(AlgebraDescriptor.full(2), PINCH_OMEGA)
    nu = State(AlgebraDescriptor.full(2), PINCH_NU)
    w = np.linalg.eigvalsh(PINCH_OMEGA)
    s_oracle = float(np.sum(w * np.log(w)) + np.log(2.0))
    s_before = relative_entropy(omega, nu)
    acc.add(
        abs(s_before - s_oracle) - tol,
        lambda: {
            "check": "pinch_before",
            "omega": _mat(PINCH_OMEGA),
            "nu": _mat(PINCH_NU),
            "tolerance": tol,
        },
    )
    pinch = diagonal_pinching(2)
    s_after = relative_entropy(pullback_state(omega, pinch), pullback_state(nu, pinch))
    acc.add(
        abs(s_after) - cfg.tol("structural"),
        lambda: {
            "check": "pinch_after",
            "omega": _mat(PINCH_OMEGA),
            "nu": _mat(PINCH_NU),
            "tolerance": cfg.tol("structural"),
        },
    )
    acc.add(
        s_after - s_before - cfg.tol("monotonicity_slack"),
        lambda: {
            "check": "pinch_monotone",
            "omega": _mat(PINCH_OMEGA),
            "nu": _mat(PINCH_NU),
            "tolerance": cfg.tol("monotonicity_slack"),
        },
    )
    return acc.result(cfg.trials)


def _recheck_classical_reduction(payload: dict) -> float:
    tol = float(payload["tolerance"])
    rho = payload_to_matrix(payload["omega"])
    sig = payload_to_matrix(payload["nu"])
    d = rho.shape[0]
    omega = State(AlgebraDescriptor.full(d), rho)
    nu = State(AlgebraDescriptor.full(d), sig)
    check = payload["check"]
    if check == "kl":
        pvec = np.diag(rho).real
        qvec = np.diag(sig).real
        kl = float(np.sum(pvec * (np.log(pvec) - np.log(qvec))))
        return abs(relative_entropy(omega, nu) - kl) - tol
    if check == "pinch_before":
        w = np.linalg.eigvalsh(rho)
        s_oracle = float(np.sum(w * np.log(w)) + np.log(2.0))
        return abs(relative_entropy(omega, nu) - s_oracle) - tol
    pinch = diagonal_pinching(d)
    s_before = relative_entropy(omega, nu)
    s_after = relative_entropy(pullback_state(omega, pinch), pullback_state(nu, pinch))
    if check == "pinch_after":
        return abs(s_after) - tol
    if check == "pinch_monotone":
        return s_after - s_before - tol
    raise ValidationError(f"unknown classical_reduction check {check!r}")


# ---------------------------------------------------------------------------
# support handling

def _suite_support_divergence(cfg: SuiteConfig) -> dict:
    acc = _Accumulator("support_divergence")
    for trial in range(cfg.trials):
        rng = rng_for(cfg.seed, SUITE_ORDER.index("support_divergence"), trial)
        d = max(2, _dim_for(cfg, trial))
        rho = random_density(d, seed=rng)
        sig = random_density(d, rank=d - 1, seed=rng)
        omega = State(AlgebraDescriptor.full(d), rho)
        nu = State(AlgebraDescriptor.full(d), sig)
        closed = relative_entropy(omega, nu)
        est, diag = relative_entropy_limit(omega, nu)
        violating = not (math.isinf(closed) and math.isinf(est) and diag.diverged)
        acc.add(
            1.0 if violating else -1.0,
            lambda: {
                "check": "divergent",
                "omega": _mat(rho),
                "nu": _mat(sig),
                "tolerance": 0.5,
            },
        )

        # contained support: both routes must stay finite and agree
        proj = support_projector(sig)
        inside = proj @ rho @ proj
        inside = hermitian_part(inside / np.trace(inside).real)
        omega_in = State(AlgebraDescriptor.full(d), inside)
        closed_in = relative_entropy(omega_in, nu)
        est_in, diag_in = relative_entropy_limit(omega_in, nu)
        bad = (
            math.isinf(closed_in)
            or math.isinf(est_in)
            or diag_in.diverged
            or abs(closed_in - est_in) > cfg.tol("limit_vs_closed")
        )
        acc.add(
            1.0 if bad else -1.0,
            lambda: {
                "check": "finite",
                "omega": _mat(inside),
                "nu": _mat(sig),
                "tolerance": cfg.tol("limit_vs_closed"),
            },
        )
    return acc.result(cfg.trials)


def _recheck_support_divergence(payload: dict) -> float:
    rho = payload_to_matrix(payload["omega"])
    sig = payload_to_matrix(payload["nu"])
    d = rho.shape[0]
    omega = State(AlgebraDescriptor.full(d), rho)
    nu = State(AlgebraDescriptor.full(d), sig)
    closed = relative_entropy(omega, nu)
    est, diag = relative_entropy_limit(omega, nu)
    if payload["check"] == "divergent":
        return 1.0 if not (math.isinf(closed) and math.isinf(est) and diag.diverged) else -1.0
    tol = float(payload["tolerance"])
    bad = (
        math.isinf(closed)
        or math.isinf(est)
        or diag.diverged
        or abs(closed - est) > tol
    )
    return 1.0 if bad else -1.0


# ---------------------------------------------------------------------------
# registry, runner, recheck dispatch

_SUITE_FUNCS = {
    "paper_example": _suite_paper_example,
    "axioms": _suite_axioms,
    "gmean": _suite_gmean,
    "prop1": _suite_prop1,
    "prop2": _suite_prop2,
    "prop3": _suite_prop3,
    "interp_identity": _suite_interp_identity,
    "repr_independence": _suite_repr_independence,
    "vn_equivalence": _suite_vn_equivalence,
    "monotonicity": _suite_monotonicity,
    "schwarz": _suite_schwarz,
    "classical_reduction": _suite_classical_reduction,
    "support_divergence": _suite_support_divergence,
}

_RECHECK_FUNCS = {
    "paper_example": _recheck_paper_example,
    "axioms": _recheck_axioms,
    "gmean": _recheck_gmean,
    "prop1": _recheck_prop12,
    "prop2": _recheck_prop12,
    "prop3": _recheck_prop3,
    "interp_identity": _recheck_interp_identity,
    "repr_independence": _recheck_repr_independence,
    "vn_equivalence": _recheck_vn_equivalence,
    "monotonicity": _recheck_monotonicity,
    "schwarz": _recheck_schwarz,
    "classical_reduction": _recheck_classical_reduction,
    "support_divergence": _recheck_support_divergence,
}


def run_suite(config: SuiteConfig) -> dict:
    """Execute the selected suites and assemble the report.

    The results section is deterministic for a given config; wall-clock data
    lives in the separate timing section.
    """
    config.validate()
    results = {}
    runtimes = {}
    for name in config.suites:
        start = time.perf_counter()
        results[name] = _SUITE_FUNCS[name](config)
        runtimes[name] = time.perf_counter() - start
    return {
        "config": config.to_dict(),
        "results": results,
        "passed": all(r["passed"] for r in results.values()),
        "timing": {
            "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
            "runtime_s": runtimes,
        },
    }


def recheck_counterexample(payload: dict) -> dict:
    """Re-run the single check described by a serialized counterexample.

    Returns the recomputed excess; the failure is reproduced when it is
    still positive."""
    if not isinstance(payload, dict) or "suite" not in payload:
        raise ConfigError("counterexample payload must be an object with a 'suite' field")
    suite = payload["suite"]
    if suite not in _RECHECK_FUNCS:
        raise ConfigError(f"unknown suite {suite!r} in counterexample")
    excess = float(_RECHECK_FUNCS[suite](payload))
    return {"suite": suite, "excess": excess, "reproduced": excess > 0}
