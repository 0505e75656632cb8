"""Positive Hermitian quadratic forms and their functional calculus.

A form is held by its matrix M, with value p(a, b) = a* M b (anti-linear in
the first slot).  Two positive forms p, q induce a quotient Hilbert space on
which they are represented by a commuting pair of PSD operators P_op and
Q_op with P_op + Q_op = I; applying a homogeneous scalar function to that
pair yields a new form on the original space.  The interpolation family
f_t(x, y) = x**(1-t) * y**t, its midpoint (the geometric mean), domination,
and pullback live here too.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .hermlin import (
    DimensionMismatchError,
    PSD_TOL,
    SUPPORT_CUTOFF,
    ValidationError,
    as_square_matrix,
    herm_eig,
    hermitian_part,
    matrix_power,
    psd_project,
    support_projector,
    validate_hermitian,
)

KERNEL_CUTOFF = SUPPORT_CUTOFF  # relative threshold below which S-directions are quotiented away
DOMINATION_RANGE_TOL = 1e-7


@dataclass(frozen=True)
class QuadraticForm:
    """Positive Hermitian sesquilinear form, stored by its PSD matrix."""

    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def from_matrix(cls, matrix, psd_tol: float = PSD_TOL) -> "QuadraticForm":
        M = validate_hermitian(matrix, name="form matrix")
        return cls(psd_project(M, psd_tol).matrix)

    @classmethod
    def zero(cls, dim: int) -> "QuadraticForm":
        return cls(np.zeros((dim, dim), dtype=complex))


@dataclass(frozen=True)
class SesquilinearForm:
    """General sesquilinear form r(a, b) = a* M b; no Hermiticity assumed."""

    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def from_matrix(cls, matrix) -> "SesquilinearForm":
        return cls(as_square_matrix(matrix, "form matrix"))


@dataclass(frozen=True)
class CompatibleRepresentation:
    """Quotient-space data for a pair of positive forms.

    The quotient of C^n by the common null space is realized in whitened
    orthonormal coordinates z = whitening_root @ iso_to_support* @ a, where
    both forms become Hermitian operators P_op, Q_op with P_op + Q_op = I.
    """

    ambient_dim: int
    support_dim: int
    iso_to_support: np.ndarray  # (n, m), orthonormal columns spanning range(M_p + M_q)
    whitening_root: np.ndarray  # (m, m), restriction of (M_p + M_q)^(1/2)
    p_op: np.ndarray  # (m, m) Hermitian PSD
    q_op: np.ndarray  # (m, m) Hermitian PSD

    def quotient_coords(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=complex).reshape(-1)
        if v.shape[0] != self.ambient_dim:
            raise DimensionMismatchError(
                f"vector has dim {v.shape[0]}, representation ambient dim {self.ambient_dim}"
            )
        return self.whitening_root @ (self.iso_to_support.conj().T @ v)


@dataclass(frozen=True)
class HomogeneousFunction:
    """Scalar function f(x, y) on the nonnegative quadrant, homogeneous of
    the given degree.  The evaluator must accept ndarray arguments.

    Homogeneity is spot-checked at construction on a fixed sample grid.
    """

    evaluator: Callable[[np.ndarray, np.ndarray], np.ndarray]
    degree: float = 1.0
    homogeneity_tol: float = field(default=1e-9, repr=False)

    def __post_init__(self):
        xs = np.array([0.2, 0.7, 1.3, 0.05])
        ys = np.array([0.9, 0.1, 0.6, 1.1])
        base = np.asarray(self.evaluator(xs, ys), dtype=float)
        for lam in (0.5, 1.7, 3.0):
            scaled = np.asarray(self.evaluator(lam * xs, lam * ys), dtype=float)
            defect = np.abs(scaled - lam**self.degree * base)
            if np.any(defect > self.homogeneity_tol * max(1.0, float(np.abs(base).max()))):
                raise ValidationError(
                    f"function is not homogeneous of degree {self.degree}: "
                    f"max defect {defect.max():.3e} at scale {lam}"
                )

    def __call__(self, x, y):
        return self.evaluator(x, y)


def evaluate_form(form, a, b) -> complex:
    """Value a* M b of a form on a pair of vectors."""
    M = form.matrix
    a = np.asarray(a, dtype=complex).reshape(-1)
    b = np.asarray(b, dtype=complex).reshape(-1)
    if a.shape[0] != M.shape[0] or b.shape[0] != M.shape[1]:
        raise DimensionMismatchError(
            f"vector dims {a.shape[0]}, {b.shape[0]} do not match form dim {M.shape[0]}"
        )
    return complex(a.conj() @ (M @ b))


def build_compatible_representation(
    p: QuadraticForm, q: QuadraticForm, kernel_cutoff: float = KERNEL_CUTOFF
) -> CompatibleRepresentation:
    """Construct the whitened quotient representation of two positive forms.

    With S = M_p + M_q, the support eigenbasis of S gives the quotient space;
    symmetric whitening by S^(1/2) turns both forms into the Hermitian PSD
    operators P_op = S^(+1/2) M_p S^(+1/2) and Q_op = I - P_op on it.
    """
    if p.dim != q.dim:
        raise DimensionMismatchError(f"form dims differ: {p.dim} vs {q.dim}")
    n = p.dim
    S = hermitian_part(p.matrix + q.matrix)
    w, V = herm_eig(S)
    scale = float(w.max(initial=0.0))
    mask = w > kernel_cutoff * max(scale, 1e-300)
    m = int(mask.sum())
    iso = V[:, mask]
    s = w[mask]
    root = np.sqrt(s)
    whitening_root = np.diag(root).astype(complex)
    if m == 0:
        empty = np.zeros((0, 0), dtype=complex)
        return CompatibleRepresentation(n, 0, iso, empty, empty.copy(), empty.copy())
    inv_root = 1.0 / root
    compressed = iso.conj().T @ p.matrix @ iso
    p_op = hermitian_part(compressed * np.outer(inv_root, inv_root))
    # Forcing Q_op = I - P_op keeps the pair exactly commuting.
    q_op = hermitian_part(np.eye(m) - p_op)
    return CompatibleRepresentation(n, m, iso, whitening_root, p_op, q_op)


def functional_calculus_form(
    rep: CompatibleRepresentation, f: HomogeneousFunction
) -> QuadraticForm:
    """Form obtained by applying f to the commuting pair (P_op, Q_op).

    P_op is diagonalized, f is evaluated on the joint spectrum points
    (p_i, 1 - p_i), and the result is un-whitened and embedded back into the
    ambient space (zero on the quotiented-away directions).
    """
    n = rep.ambient_dim
    if rep.support_dim == 0:
        return QuadraticForm.zero(n)
    w, V = herm_eig(rep.p_op)
    x = np.clip(w, 0.0, 1.0)
    # Spectrum points this close to the endpoints are exact zeros of one of
    # the forms seen through round-off; snapping keeps fractional powers from
    # amplifying the noise (noise**t is huge for small t).  The eigenvalue
    # error of the whitened operator scales with the conditioning of the sum
    # form, so the snap zone must widen accordingly.
    root = np.diagonal(rep.whitening_root).real
    cond = float((root.max() / root.min()) ** 2) if root.size else 1.0
    snap = min(max(KERNEL_CUTOFF, 256.0 * np.finfo(float).eps * cond), 1e-8)
    x[x < snap] = 0.0
    x[x > 1.0 - snap] = 1.0
    fx = np.asarray(f(x, 1.0 - x), dtype=float)
    if not np.all(np.isfinite(fx)):
        raise ValidationError(
            f"function undefined on the joint spectrum: values {fx} at points {x}"
        )
    core = (V * fx) @ V.conj().T
    half = rep.iso_to_support @ rep.whitening_root
    M = half @ core @ half.conj().T
    return QuadraticForm(hermitian_part(M))


def interpolate(p: QuadraticForm, q: QuadraticForm, t: float) -> QuadraticForm:
    """Interpolation of two positive forms via f_t(x, y) = x**(1-t) * y**t.

    The endpoints are returned exactly: t = 0 gives p, t = 1 gives q.
    """
    if not 0.0 <= t <= 1.0:
        raise ValidationError(f"interpolation parameter t={t} outside [0, 1]")
    if p.dim != q.dim:
        raise DimensionMismatchError(f"form dims differ: {p.dim} vs {q.dim}")
    if t == 0.0:
        return QuadraticForm(p.matrix.copy())
    if t == 1.0:
        return QuadraticForm(q.matrix.copy())
    rep = build_compatible_representation(p, q)

    def f_t(x, y):
        # exponents are in (0, 1), so 0**(1-t) and 0**t are both 0
        return np.power(x, 1.0 - t) * np.power(y, t)

    return functional_calculus_form(rep, HomogeneousFunction(f_t))


def geometric_mean(p: QuadraticForm, q: QuadraticForm) -> QuadraticForm:
    return interpolate(p, q, 0.5)


def pullback_form(form, phi):
    """Pull a form on C^n back along a linear map phi: C^n' -> C^n.

    The new matrix is phi* M phi; positivity is preserved for quadratic
    forms.
    """
    phi = np.asarray(phi, dtype=complex)
    if phi.ndim != 2 or phi.shape[0] != form.dim:
        raise DimensionMismatchError(
            f"map shape {phi.shape} incompatible with form dim {form.dim}"
        )
    M = phi.conj().T @ form.matrix @ phi
    if isinstance(form, QuadraticForm):
        return QuadraticForm(hermitian_part(M))
    return SesquilinearForm(M)


@dataclass(frozen=True)
class DominationCertificate:
    dominated: bool
    norm: float  # operator norm of M_p^(+1/2) M_r M_q^(+1/2)
    range_defect_p: float
    range_defect_q: float


def is_dominated(
    r,
    p: QuadraticForm,
    q: QuadraticForm,
    tol: float = 1e-9,
    range_tol: float = DOMINATION_RANGE_TOL,
) -> DominationCertificate:
    """Exact factorization test for |r(a,b)|^2 <= p(a,a) q(b,b).

    Equivalent to: range(M_r) inside range(M_p), range(M_r*) inside
    range(M_q), and the operator norm of M_p^(+1/2) M_r M_q^(+1/2) at most
    one (a Cauchy-Schwarz factorization argument).  The certificate carries
    the norm and the relative range defects.
    """
    if r.dim != p.dim or r.dim != q.dim:
        raise DimensionMismatchError(
            f"form dims differ: r={r.dim}, p={p.dim}, q={q.dim}"
        )
    Mr = r.matrix
    scale = max(1.0, float(np.linalg.norm(Mr)))
    proj_p = support_projector(p.matrix)
    proj_q = support_projector(q.matrix)
    n = p.dim
    defect_p = float(np.linalg.norm((np.eye(n) - proj_p) @ Mr)) / scale
    defect_q = float(np.linalg.norm((np.eye(n) - proj_q) @ Mr.conj().T)) / scale
    # the inverse roots must be taken support-aware in one step: taking a
    # plain sqrt first lifts eigenvalue noise above the pseudo-inverse cutoff
    X = matrix_power(p.matrix, -0.5) @ Mr @ matrix_power(q.matrix, -0.5)
    norm = float(np.linalg.norm(X, ord=2))
    dominated = defect_p <= range_tol and defect_q <= range_tol and norm <= 1.0 + tol
    return DominationCertificate(dominated, norm, defect_p, defect_q)


def random_dominated_form(
    p: QuadraticForm,
    q: QuadraticForm,
    contraction_scale: float = 1.0,
    seed=None,
    hermitian: bool = False,
    max_attempts: int = 200,
) -> SesquilinearForm:
    """Sample a form certified dominated by p and q.

    Built as M_p^(1/2) K M_q^(1/2) with K a Ginibre matrix rescaled to
    operator norm contraction_scale.  With hermitian=True the symmetrized
    form is returned only when it passes the domination test itself;
    otherwise a fresh K is drawn.
    """
    if not 0.0 <= contraction_scale <= 1.0:
        raise ValidationError(f"contraction_scale={contraction_scale} outside [0, 1]")
    if p.dim != q.dim:
        raise DimensionMismatchError(f"form dims differ: {p.dim} vs {q.dim}")
    n = p.dim
    if contraction_scale == 0.0:
        return SesquilinearForm(np.zeros((n, n), dtype=complex))
    rng = np.random.default_rng(seed)
    sp = matrix_power(p.matrix, 0.5)
    sq = matrix_power(q.matrix, 0.5)
    for _ in range(max_attempts):
        K = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        knorm = float(np.linalg.norm(K, ord=2))
        if knorm == 0.0:
            continue
        K *= contraction_scale / knorm
        M = sp @ K @ sq
        if not hermitian:
            return SesquilinearForm(M)
        H = hermitian_part(M)
        cert = is_dominated(SesquilinearForm(H), p, q)
        if cert.dominated:
            return SesquilinearForm(H)
        if cert.range_defect_p <= DOMINATION_RANGE_TOL and cert.range_defect_q <= DOMINATION_RANGE_TOL:
            # only the norm is too large; shrinking fixes it without touching ranges
            H = H * (contraction_scale / cert.norm)
            if is_dominated(SesquilinearForm(H), p, q).dominated:
                return SesquilinearForm(H)
    raise RuntimeError(
        f"no Hermitian dominated form found in {max_attempts} attempts "
        f"(contraction_scale={contraction_scale})"
    )
