"""Finite-dimensional matrix *-algebras and the forms induced by states.

An algebra is a direct sum of full matrix blocks.  States are positive
linear functionals held as PSD density matrices; each state induces two
positive forms on the algebra, represented on the Hilbert-Schmidt space by
left- and right-multiplication superoperators.

vec convention (used everywhere in this package): column stacking, so
vec(A X B) = (B^T kron A) vec(X).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hermlin import (
    DimensionMismatchError,
    PSD_TOL,
    ValidationError,
    as_square_matrix,
    psd_project,
    validate_hermitian,
)
from .qforms import QuadraticForm

BLOCK_TOL = 1e-12
TRACE_TOL = 1e-12


def vec(X: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization."""
    return np.asarray(X, dtype=complex).reshape(-1, order="F")


def unvec(v: np.ndarray, dim: int) -> np.ndarray:
    v = np.asarray(v, dtype=complex).reshape(-1)
    if v.shape[0] != dim * dim:
        raise DimensionMismatchError(f"vector length {v.shape[0]} is not {dim}^2")
    return v.reshape((dim, dim), order="F")


def hs_inner(a, b) -> complex:
    """Hilbert-Schmidt inner product Tr(a* b)."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"shape mismatch: {a.shape} vs {b.shape}")
    return complex(np.trace(a.conj().T @ b))


@dataclass(frozen=True)
class AlgebraDescriptor:
    """Direct sum of full matrix blocks M_{d_1} + ... + M_{d_k}."""

    block_dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.block_dims)
        if not dims or any(d < 1 for d in dims):
            raise ValidationError(f"invalid block dims {self.block_dims}")
        object.__setattr__(self, "block_dims", dims)

    @property
    def dim(self) -> int:
        """Total matrix dimension n = sum of block dims."""
        return sum(self.block_dims)

    @property
    def vector_dim(self) -> int:
        """Dimension of the algebra as a vector space: sum of squared block dims."""
        return sum(d * d for d in self.block_dims)

    @property
    def is_commutative(self) -> bool:
        return all(d == 1 for d in self.block_dims)

    def block_slices(self) -> list[slice]:
        out, off = [], 0
        for d in self.block_dims:
            out.append(slice(off, off + d))
            off += d
        return out

    def identity(self) -> np.ndarray:
        return np.eye(self.dim, dtype=complex)

    @classmethod
    def full(cls, n: int) -> "AlgebraDescriptor":
        return cls((n,))

    @classmethod
    def commutative(cls, n: int) -> "AlgebraDescriptor":
        return cls((1,) * n)


def off_block_norm(descriptor: AlgebraDescriptor, X: np.ndarray) -> float:
    mask = np.ones((descriptor.dim, descriptor.dim), dtype=bool)
    for sl in descriptor.block_slices():
        mask[sl, sl] = False
    return float(np.linalg.norm(X[mask])) if mask.any() else 0.0


@dataclass(frozen=True)
class State:
    """Positive linear functional a -> Tr(density a) on a matrix algebra."""

    algebra: AlgebraDescriptor
    density: np.ndarray
    normalized: bool = True

    @property
    def dim(self) -> int:
        return self.algebra.dim


def make_state(
    algebra: AlgebraDescriptor,
    density,
    normalized: bool = True,
    psd_tol: float = PSD_TOL,
) -> State:
    """Validate and build a state: PSD, block-compatible, trace one if
    normalization is requested."""
    rho = validate_hermitian(density, name="density")
    if rho.shape[0] != algebra.dim:
        raise DimensionMismatchError(
            f"density dim {rho.shape[0]} does not match algebra dim {algebra.dim}"
        )
    off = off_block_norm(algebra, rho)
    if off > BLOCK_TOL * max(1.0, float(np.linalg.norm(rho))):
        raise ValidationError(
            f"density has off-block entries (norm {off:.3e}) for blocks {algebra.block_dims}"
        )
    rho = psd_project(rho, psd_tol).matrix
    if normalized:
        tr = float(np.trace(rho).real)
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValidationError(f"normalized state must have trace 1, got {tr!r}")
    return State(algebra, rho, normalized)


def functional_value(state: State, a) -> complex:
    """Tr(density a); real for Hermitian a, nonnegative for PSD a."""
    a = as_square_matrix(a, "algebra element")
    if a.shape[0] != state.dim:
        raise DimensionMismatchError(
            f"element dim {a.shape[0]} does not match algebra dim {state.dim}"
        )
    return complex(np.trace(state.density @ a))


def form_right(state: State) -> QuadraticForm:
    """Form (a, b) -> Tr(density b a*) as a quadratic form on vec space C^(n^2).

    Its matrix is the left-multiplication superoperator I kron density.
    """
    n = state.dim
    return QuadraticForm(np.kron(np.eye(n), state.density))


def form_left(state: State) -> QuadraticForm:
    """Form (a, b) -> Tr(density a* b); the right-multiplication
    superoperator density^T kron I."""
    n = state.dim
    return QuadraticForm(np.kron(state.density.T, np.eye(n)))


def _intrinsic_basis(descriptor: AlgebraDescriptor):
    """Matrix units of each block, in intrinsic coordinate order (block-major,
    column-stacked within each block)."""
    n = descriptor.dim
    for sl, d in zip(descriptor.block_slices(), descriptor.block_dims):
        for j in range(d):
            for i in range(d):
                E = np.zeros((n, n), dtype=complex)
                E[sl.start + i, sl.start + j] = 1.0
                yield E


def intrinsic_to_matrix(descriptor: AlgebraDescriptor, coeffs) -> np.ndarray:
    """Assemble a block-diagonal algebra element from intrinsic coordinates."""
    coeffs = np.asarray(coeffs, dtype=complex).reshape(-1)
    if coeffs.shape[0] != descriptor.vector_dim:
        raise DimensionMismatchError(
            f"expected {descriptor.vector_dim} coordinates, got {coeffs.shape[0]}"
        )
    X = np.zeros((descriptor.dim, descriptor.dim), dtype=complex)
    off = 0
    for sl, d in zip(descriptor.block_slices(), descriptor.block_dims):
        X[sl, sl] = coeffs[off : off + d * d].reshape((d, d), order="F")
        off += d * d
    return X


def matrix_to_intrinsic(descriptor: AlgebraDescriptor, X) -> np.ndarray:
    """Extract intrinsic coordinates (the diagonal blocks) of a matrix."""
    X = as_square_matrix(X, "algebra element")
    if X.shape[0] != descriptor.dim:
        raise DimensionMismatchError(
            f"element dim {X.shape[0]} does not match algebra dim {descriptor.dim}"
        )
    parts = [X[sl, sl].reshape(-1, order="F") for sl in descriptor.block_slices()]
    return np.concatenate(parts) if parts else np.zeros(0, dtype=complex)


def subalgebra_injection(
    sub: AlgebraDescriptor, parent_dim: int, assignment: list[int] | tuple[int, ...]
) -> np.ndarray:
    """Superoperator of a unital *-homomorphism from a block algebra into M_n.

    The parent diagonal is tiled in order; assignment[j] names the sub-block
    copied into tile j, and every sub-block must be used at least once.  The
    returned matrix has shape (n^2, vector_dim of sub) and maps intrinsic
    coordinates of the sub-algebra to vec'd parent matrices.
    """
    assignment = tuple(int(k) for k in assignment)
    if not assignment:
        raise ValidationError("embedding assignment is empty")
    n_blocks = len(sub.block_dims)
    if any(k < 0 or k >= n_blocks for k in assignment):
        raise ValidationError(
            f"embedding refers to unknown sub-block in {assignment} "
            f"(sub has {n_blocks} blocks)"
        )
    if set(assignment) != set(range(n_blocks)):
        missing = sorted(set(range(n_blocks)) - set(assignment))
        raise ValidationError(f"embedding is not injective: sub-blocks {missing} unused")
    tile_dims = [sub.block_dims[k] for k in assignment]
    if sum(tile_dims) != parent_dim:
        raise ValidationError(
            f"tiles {tile_dims} do not fill parent dimension {parent_dim}"
        )
    tile_offsets = np.concatenate([[0], np.cumsum(tile_dims)])[:-1]
    block_offsets = {}
    off = 0
    for k, d in enumerate(sub.block_dims):
        block_offsets[k] = off
        off += d * d
    J = np.zeros((parent_dim * parent_dim, sub.vector_dim), dtype=complex)
    for j, k in enumerate(assignment):
        d = sub.block_dims[k]
        t0 = int(tile_offsets[j])
        for col in range(d):
            for row in range(d):
                intrinsic_idx = block_offsets[k] + col * d + row
                E = np.zeros((parent_dim, parent_dim), dtype=complex)
                E[t0 + row, t0 + col] = 1.0
                J[:, intrinsic_idx] += vec(E)
    return J


def injection_pullback_density(
    sub: AlgebraDescriptor,
    parent_dim: int,
    assignment: list[int] | tuple[int, ...],
    density: np.ndarray,
) -> np.ndarray:
    """Density of the state pulled back along a subalgebra injection: block k
    collects the parent diagonal tiles assigned to it."""
    density = as_square_matrix(density, "density")
    if density.shape[0] != parent_dim:
        raise DimensionMismatchError(
            f"density dim {density.shape[0]} does not match parent {parent_dim}"
        )
    assignment = tuple(int(k) for k in assignment)
    tile_dims = [sub.block_dims[k] for k in assignment]
    tile_offsets = np.concatenate([[0], np.cumsum(tile_dims)])[:-1]
    out = np.zeros((sub.dim, sub.dim), dtype=complex)
    slices = sub.block_slices()
    for j, k in enumerate(assignment):
        d = sub.block_dims[k]
        t0 = int(tile_offsets[j])
        out[slices[k], slices[k]] += density[t0 : t0 + d, t0 : t0 + d]
    return out


@dataclass(frozen=True)
class HomomorphismReport:
    unital_residual: float
    multiplicative_residual: float
    adjoint_residual: float

    @property
    def ok(self) -> bool:
        return max(
            self.unital_residual, self.multiplicative_residual, self.adjoint_residual
        ) <= 1e-12


def verify_unital_homomorphism(
    J: np.ndarray, sub: AlgebraDescriptor, parent_dim: int
) -> HomomorphismReport:
    """Check Phi(e) = e, Phi(xy) = Phi(x)Phi(y) and Phi(x*) = Phi(x)* on the
    matrix-unit generators of the block algebra."""
    basis = list(_intrinsic_basis(sub))
    coords = [matrix_to_intrinsic(sub, E) for E in basis]
    images = [unvec(J @ c, parent_dim) for c in coords]
    e_img = unvec(J @ matrix_to_intrinsic(sub, sub.identity()), parent_dim)
    unital = float(np.linalg.norm(e_img - np.eye(parent_dim)))
    mult = 0.0
    adj = 0.0
    for E1, F1 in zip(basis, images):
        adj_img = unvec(J @ matrix_to_intrinsic(sub, E1.conj().T), parent_dim)
        adj = max(adj, float(np.linalg.norm(adj_img - F1.conj().T)))
        for E2, F2 in zip(basis, images):
            prod_img = unvec(J @ matrix_to_intrinsic(sub, E1 @ E2), parent_dim)
            mult = max(mult, float(np.linalg.norm(prod_img - F1 @ F2)))
    return HomomorphismReport(unital, mult, adj)
