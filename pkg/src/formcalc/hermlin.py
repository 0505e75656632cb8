"""Dense complex Hermitian linear algebra.

Eigendecompositions with deterministic phase fixing, spectral functions on
the clipped spectrum, Loewner-order comparisons, and PSD validation.  All
routines are pure functions on ndarrays; nothing here mutates its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-10
SUPPORT_CUTOFF = 1e-12


class ValidationError(ValueError):
    """Input fails a structural precondition (shape, Hermiticity, ...)."""


class NotPSDError(ValidationError):
    """A matrix required to be positive semidefinite has a genuinely
    negative eigenvalue (below the clipping tolerance)."""


class DimensionMismatchError(ValidationError):
    """Operands have incompatible shapes."""


class SpectralDomainError(ValidationError):
    """A scalar function is undefined (non-finite) at an eigenvalue."""


class EigenDecomposition(NamedTuple):
    eigenvalues: np.ndarray  # real, ascending
    eigenvectors: np.ndarray  # unitary, columns match eigenvalues


@dataclass(frozen=True)
class PsdProjection:
    matrix: np.ndarray
    clipped: tuple[float, ...]  # eigenvalues that were rounded up to zero


@dataclass(frozen=True)
class LoewnerResult:
    holds: bool
    min_eigenvalue: float
    witness: np.ndarray  # eigenvector attaining the minimal eigenvalue of B - A


def as_square_matrix(A, name: str = "matrix") -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatchError(f"{name} must be square, got shape {A.shape}")
    return A


def hermitian_part(A: np.ndarray) -> np.ndarray:
    return (A + A.conj().T) / 2


def validate_hermitian(A, tol: float = HERMITIAN_TOL, name: str = "matrix") -> np.ndarray:
    """Return A as a complex ndarray, raising if it is not Hermitian.

    The deviation is measured relative to max(1, max-abs entry); the error
    names the worst offending entry pair.
    """
    A = as_square_matrix(A, name)
    if A.size == 0:
        return A
    defect = np.abs(A - A.conj().T)
    scale = max(1.0, float(np.abs(A).max()))
    worst = np.unravel_index(int(np.argmax(defect)), defect.shape)
    if defect[worst] > tol * scale:
        i, j = worst
        raise ValidationError(
            f"{name} is not Hermitian: entry ({i},{j})={A[i, j]:.6g} vs "
            f"conj(({j},{i}))={np.conj(A[j, i]):.6g}, deviation {defect[worst]:.3e}"
        )
    return A


def herm_eig(A, tol: float = HERMITIAN_TOL) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix.

    Eigenvalues come back ascending; each eigenvector is phase-fixed so that
    its largest-magnitude entry is real and positive, which makes serialized
    output reproducible.
    """
    A = validate_hermitian(A, tol)
    w, V = np.linalg.eigh(hermitian_part(A))
    V = _fix_phases(V)
    return EigenDecomposition(w, V)


def _fix_phases(V: np.ndarray) -> np.ndarray:
    V = V.copy()
    for k in range(V.shape[1]):
        col = V[:, k]
        idx = int(np.argmax(np.abs(col)))
        pivot = col[idx]
        if np.abs(pivot) > 0:
            V[:, k] = col * (np.conj(pivot) / np.abs(pivot))
    return V


def psd_project(A, tol: float = PSD_TOL) -> PsdProjection:
    """Clip negative eigenvalue noise of a Hermitian matrix to zero.

    Eigenvalues in [-cutoff, 0) are clipped and reported; anything below the
    cutoff raises NotPSDError.  The cutoff is tol relative to the largest
    eigenvalue (absolute tol when the spectrum is non-positive).
    """
    dec = herm_eig(A)
    w = dec.eigenvalues
    if w.size == 0:
        return PsdProjection(np.asarray(A, dtype=complex), ())
    lam_max = float(w[-1])
    cutoff = tol * lam_max if lam_max > 0 else tol
    if w[0] < -cutoff:
        raise NotPSDError(
            f"matrix is not PSD: eigenvalue {w[0]:.6e} below -{cutoff:.3e}"
        )
    clipped = tuple(float(x) for x in w[w < 0])
    if not clipped:
        return PsdProjection(hermitian_part(np.asarray(A, dtype=complex)), ())
    w = np.maximum(w, 0.0)
    M = (dec.eigenvectors * w) @ dec.eigenvectors.conj().T
    return PsdProjection(hermitian_part(M), clipped)


def apply_spectral_function(
    A,
    f: Callable[[np.ndarray], np.ndarray],
    psd_tol: float = PSD_TOL,
) -> np.ndarray:
    """Apply a scalar function to the clipped spectrum of a PSD matrix.

    f receives the full (clipped, ascending) eigenvalue array and must
    return an array of the same shape.  Non-finite values of f raise
    SpectralDomainError.
    """
    proj = psd_project(A, psd_tol)
    dec = herm_eig(proj.matrix)
    w = np.maximum(dec.eigenvalues, 0.0)
    fw = np.asarray(f(w), dtype=float)
    if fw.shape != w.shape:
        raise SpectralDomainError(
            f"spectral function returned shape {fw.shape}, expected {w.shape}"
        )
    if not np.all(np.isfinite(fw)):
        bad = w[~np.isfinite(fw)]
        raise SpectralDomainError(f"spectral function undefined at eigenvalue(s) {bad}")
    M = (dec.eigenvectors * fw) @ dec.eigenvectors.conj().T
    return hermitian_part(M)


def apply_hermitian_function(
    A,
    f: Callable[[np.ndarray], np.ndarray],
    tol: float = HERMITIAN_TOL,
) -> np.ndarray:
    """Spectral map for functions defined on the whole real line (exp,
    polynomials, ...); unlike apply_spectral_function no PSD clipping is
    done, so negative spectrum passes through to f."""
    dec = herm_eig(A, tol)
    fw = np.asarray(f(dec.eigenvalues), dtype=float)
    if not np.all(np.isfinite(fw)):
        bad = dec.eigenvalues[~np.isfinite(fw)]
        raise SpectralDomainError(f"spectral function undefined at eigenvalue(s) {bad}")
    M = (dec.eigenvectors * fw) @ dec.eigenvectors.conj().T
    return hermitian_part(M)


def _support_mask(w: np.ndarray, cutoff: float = SUPPORT_CUTOFF) -> np.ndarray:
    scale = float(w.max(initial=0.0))
    return w > cutoff * max(scale, 1e-300)


def matrix_sqrt(A, psd_tol: float = PSD_TOL) -> np.ndarray:
    return apply_spectral_function(A, np.sqrt, psd_tol)


def matrix_power(A, s: float, psd_tol: float = PSD_TOL) -> np.ndarray:
    """A**s on the support, with the conventions 0**s = 0 for s > 0 and
    0**0 = 1 (so s = 0 yields the identity)."""
    if s == 0:

        def f(w):
            return np.ones_like(w)

    elif s == 1:

        def f(w):
            return w

    else:

        def f(w):
            out = np.zeros_like(w)
            mask = _support_mask(w)
            out[mask] = w[mask] ** s
            return out

    return apply_spectral_function(A, f, psd_tol)


def matrix_log_support(A, psd_tol: float = PSD_TOL) -> np.ndarray:
    """log(A) on the support; zero eigenvalues map to 0 in the eigenvalue
    slot (only meaningful where multiplied by vanishing weights)."""

    def f(w):
        out = np.zeros_like(w)
        mask = _support_mask(w)
        out[mask] = np.log(w[mask])
        return out

    return apply_spectral_function(A, f, psd_tol)


def matrix_pinv(A, psd_tol: float = PSD_TOL) -> np.ndarray:
    def f(w):
        out = np.zeros_like(w)
        mask = _support_mask(w)
        out[mask] = 1.0 / w[mask]
        return out

    return apply_spectral_function(A, f, psd_tol)


def support_projector(A, psd_tol: float = PSD_TOL) -> np.ndarray:
    def f(w):
        return _support_mask(w).astype(float)

    return apply_spectral_function(A, f, psd_tol)


def loewner_leq(A, B, tol: float = 1e-10) -> LoewnerResult:
    """Decide A <= B in the Loewner order, with a witness when it fails.

    True iff the minimal eigenvalue of B - A is >= -tol; the witness is the
    eigenvector for that minimal eigenvalue.
    """
    A = validate_hermitian(A, name="A")
    B = validate_hermitian(B, name="B")
    if A.shape != B.shape:
        raise DimensionMismatchError(f"shape mismatch: {A.shape} vs {B.shape}")
    dec = herm_eig(hermitian_part(B - A))
    lam = float(dec.eigenvalues[0])
    return LoewnerResult(lam >= -tol, lam, dec.eigenvectors[:, 0])
