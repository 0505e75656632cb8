"""Relative entropy on matrix algebras: interpolation closed forms, the
spectral (von Neumann style) expression, and a small-t difference-quotient
estimator that realizes the defining limit numerically.

The defining quantity is -lim_{t->0+} (gamma_t(e, e) - omega_R(e, e)) / t,
where gamma_t is the interpolation of the right form of the first state and
the left form of the second.  For density matrices this collapses to the
closed form Tr(rho (log rho - log sigma)) whenever the support condition
holds, and diverges otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import State
from .hermlin import (
    DimensionMismatchError,
    SUPPORT_CUTOFF,
    ValidationError,
    as_square_matrix,
    herm_eig,
)

SUPPORT_MASS_TOL = 1e-9
DIVERGENCE_THRESHOLD = 1e3
CAUCHY_GAP = 1e-6
LIMINF_GUARD_GAP = 1e-6


def _check_pair(omega: State, nu: State) -> int:
    if omega.algebra.block_dims != nu.algebra.block_dims:
        raise DimensionMismatchError(
            f"states live on different algebras: {omega.algebra.block_dims} "
            f"vs {nu.algebra.block_dims}"
        )
    return omega.dim


def _fractional(eigs: np.ndarray, s: float) -> np.ndarray:
    """Eigenvalue powers with 0**s = 0 for s > 0 and x**0 = 1 (including 0)."""
    if s == 0:
        return np.ones_like(eigs)
    scale = float(eigs.max(initial=0.0))
    mask = eigs > SUPPORT_CUTOFF * max(scale, 1e-300)
    out = np.zeros_like(eigs)
    out[mask] = eigs[mask] ** s
    return out


def gamma_states(omega: State, nu: State, t: float, a, b) -> complex:
    """Closed-form interpolation value Tr(a* rho^(1-t) b sigma^t).

    At t = 0 the sigma factor is the identity (x**0 = 1 convention), so the
    value is exactly the right form of omega; symmetrically at t = 1.
    """
    if not 0.0 <= t <= 1.0:
        raise ValidationError(f"interpolation parameter t={t} outside [0, 1]")
    n = _check_pair(omega, nu)
    a = as_square_matrix(a, "a")
    b = as_square_matrix(b, "b")
    if a.shape[0] != n or b.shape[0] != n:
        raise DimensionMismatchError(
            f"element dims {a.shape[0]}, {b.shape[0]} do not match algebra dim {n}"
        )
    ww, Vw = herm_eig(omega.density)
    wn, Vn = herm_eig(nu.density)
    om_pow = (Vw * _fractional(np.maximum(ww, 0.0), 1.0 - t)) @ Vw.conj().T
    nu_pow = (Vn * _fractional(np.maximum(wn, 0.0), t)) @ Vn.conj().T
    return complex(np.trace(a.conj().T @ om_pow @ b @ nu_pow))


def support_mass_outside(omega: State, nu: State, cutoff: float = SUPPORT_CUTOFF) -> float:
    """Mass of omega outside the support of nu: Tr(rho (I - Pi_sigma))."""
    n = _check_pair(omega, nu)
    wn, Vn = herm_eig(nu.density)
    scale = float(wn.max(initial=0.0))
    mask = wn > cutoff * max(scale, 1e-300)
    proj = (Vn * mask.astype(float)) @ Vn.conj().T
    return float(np.trace(omega.density @ (np.eye(n) - proj)).real)


def relative_entropy(
    omega: State, nu: State, support_tol: float = SUPPORT_MASS_TOL
) -> float:
    """Tr(rho log rho) - Tr(rho log sigma) on supports; +inf when the
    support of omega is not contained in the support of nu.

    Uses the 0 log 0 = 0 convention throughout.
    """
    _check_pair(omega, nu)
    total = max(float(np.trace(omega.density).real), 1.0)
    if support_mass_outside(omega, nu) > support_tol * total:
        return math.inf
    ww, Vw = herm_eig(omega.density)
    wn, Vn = herm_eig(nu.density)
    ww = np.maximum(ww, 0.0)
    w_scale = float(ww.max(initial=0.0))
    w_mask = ww > SUPPORT_CUTOFF * max(w_scale, 1e-300)
    ent = float(np.sum(ww[w_mask] * np.log(ww[w_mask])))
    n_scale = float(wn.max(initial=0.0))
    n_mask = wn > SUPPORT_CUTOFF * max(n_scale, 1e-300)
    weights = np.einsum("ij,ij->j", Vn.conj(), omega.density @ Vn).real
    cross = float(np.sum(weights[n_mask] * np.log(wn[n_mask])))
    return ent - cross


@dataclass(frozen=True)
class LimitSchedule:
    """Strictly decreasing interpolation parameters used by the estimator."""

    t_values: tuple[float, ...] = tuple(2.0 ** (-k) for k in range(1, 21))
    extrapolation: str = "richardson-1"

    def __post_init__(self):
        ts = tuple(float(t) for t in self.t_values)
        if not ts or any(not 0.0 < t < 1.0 for t in ts):
            raise ValidationError(f"schedule values must lie in (0, 1): {ts}")
        if any(t2 >= t1 for t1, t2 in zip(ts, ts[1:])):
            raise ValidationError("schedule must be strictly decreasing")
        if self.extrapolation not in ("none", "richardson-1"):
            raise ValidationError(f"unknown extrapolation {self.extrapolation!r}")
        object.__setattr__(self, "t_values", ts)


@dataclass
class LimitDiagnostics:
    t_values: list[float] = field(default_factory=list)
    quotients: list[complex] = field(default_factory=list)
    extrapolated: list[complex] = field(default_factory=list)
    converged: bool = False
    diverged: bool = False
    tail_min: float | None = None
    liminf_gap: float | None = None
    liminf_flag: bool = False


def _difference_quotients(values, base, ts):
    return [-(g - base) / t for g, t in zip(values, ts)]


def _richardson(quotients, ts):
    """One-step Richardson extrapolation assuming a leading O(t) error and a
    halving schedule; falls back to the raw value at the first node."""
    out = [quotients[0]]
    for k in range(1, len(quotients)):
        ratio = ts[k - 1] / ts[k]
        out.append((ratio * quotients[k] - quotients[k - 1]) / (ratio - 1.0))
    return out


def _estimate_limit(
    gammas: list[complex],
    base: complex,
    schedule: LimitSchedule,
    divergence_threshold: float,
    cauchy_gap: float,
) -> tuple[complex | float, LimitDiagnostics]:
    ts = list(schedule.t_values)
    diag = LimitDiagnostics(t_values=ts)
    diag.quotients = _difference_quotients(gammas, base, ts)
    if schedule.extrapolation == "richardson-1" and len(diag.quotients) > 1:
        diag.extrapolated = _richardson(diag.quotients, ts)
    else:
        diag.extrapolated = list(diag.quotients)
    seq = diag.extrapolated
    raw = diag.quotients
    tail = raw[-min(5, len(raw)) :]
    if abs(raw[-1]) > divergence_threshold and all(
        abs(b) > abs(a) for a, b in zip(tail, tail[1:])
    ):
        diag.diverged = True
        return math.inf, diag
    limit = seq[-1]
    if len(seq) > 1 and abs(seq[-1] - seq[-2]) < cauchy_gap:
        diag.converged = True
    ext_tail = seq[-min(5, len(seq)) :]
    diag.tail_min = min(float(np.real(v)) for v in ext_tail)
    diag.liminf_gap = float(np.real(limit)) - diag.tail_min
    diag.liminf_flag = abs(diag.liminf_gap) > LIMINF_GUARD_GAP
    return limit, diag


def relative_entropy_limit(
    omega: State,
    nu: State,
    schedule: LimitSchedule | None = None,
    divergence_threshold: float = DIVERGENCE_THRESHOLD,
    cauchy_gap: float = CAUCHY_GAP,
) -> tuple[float, LimitDiagnostics]:
    """Estimate the relative entropy from the small-t difference quotients
    D(t) = -(gamma_t(e, e) - gamma_0(e, e)) / t.

    Returns the extrapolated limit once successive extrapolants are within
    cauchy_gap, or +inf when the quotients blow through the divergence
    threshold with monotone growth.  Diagnostics carry the full table, the
    tail minimum (a guard for the lim-inf semantics) and convergence flags.
    """
    schedule = schedule or LimitSchedule()
    n = omega.dim
    e = np.eye(n)
    base = gamma_states(omega, nu, 0.0, e, e)
    gammas = [gamma_states(omega, nu, t, e, e) for t in schedule.t_values]
    limit, diag = _estimate_limit(
        gammas, base, schedule, divergence_threshold, cauchy_gap
    )
    if limit is math.inf or (isinstance(limit, float) and math.isinf(limit)):
        return math.inf, diag
    return float(np.real(limit)), diag


def relative_entropy_functional(
    omega: State,
    nu: State,
    a,
    b,
    schedule: LimitSchedule | None = None,
    divergence_threshold: float = DIVERGENCE_THRESHOLD,
    cauchy_gap: float = CAUCHY_GAP,
) -> tuple[complex | float, LimitDiagnostics]:
    """Sesquilinear version of the limit estimator, evaluated at a pair of
    algebra elements; at a = b = e it reduces to relative_entropy_limit."""
    schedule = schedule or LimitSchedule()
    base = gamma_states(omega, nu, 0.0, a, b)
    gammas = [gamma_states(omega, nu, t, a, b) for t in schedule.t_values]
    return _estimate_limit(gammas, base, schedule, divergence_threshold, cauchy_gap)
