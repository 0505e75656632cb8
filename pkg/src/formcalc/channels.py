"""Unital maps between matrix algebras in the Heisenberg direction.

A KrausChannel maps M_m -> M_n via x -> sum K_i* x K_i with the unitality
constraint sum K_i* K_i = I_n, which makes the Schroedinger-picture dual
(rho -> sum K_i rho K_i*) trace preserving.  Maps without a unital Kraus
form (the transpose, deliberately broken examples) are carried as plain
superoperators.  Verification helpers test the Schwarz inequality
Phi(a*) Phi(a) <= Phi(a* a), positivity, and the gap between pulling back
the right form of a state and the right form of the pulled-back state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (
    AlgebraDescriptor,
    State,
    injection_pullback_density,
    subalgebra_injection,
    unvec,
    vec,
)
from .hermlin import (
    DimensionMismatchError,
    ValidationError,
    as_square_matrix,
    hermitian_part,
    loewner_leq,
)
UNITALITY_TOL = 1e-12
SCHWARZ_SLACK = 1e-10


@dataclass(frozen=True)
class KrausChannel:
    """Unital completely positive map M_m -> M_n given by its Kraus factors."""

    kraus: tuple[np.ndarray, ...]

    @property
    def source_dim(self) -> int:
        return self.kraus[0].shape[0]

    @property
    def target_dim(self) -> int:
        return self.kraus[0].shape[1]

    def superoperator(self) -> np.ndarray:
        n2, m2 = self.target_dim**2, self.source_dim**2
        S = np.zeros((n2, m2), dtype=complex)
        for K in self.kraus:
            S += np.kron(K.T, K.conj().T)
        return S


@dataclass(frozen=True)
class LinearMapOnAlgebra:
    """General linear map between matrix algebras, stored as a superoperator
    under the package-wide column-stacking vec convention."""

    source_dim: int
    target_dim: int
    superoperator_matrix: np.ndarray  # (target^2, source^2)
    adjoint_preserving: bool = True

    def superoperator(self) -> np.ndarray:
        return self.superoperator_matrix


def from_kraus(kraus, tol: float = UNITALITY_TOL) -> KrausChannel:
    """Validate Kraus factors: consistent shapes and unitality."""
    mats = tuple(np.asarray(K, dtype=complex) for K in kraus)
    if not mats:
        raise ValidationError("channel needs at least one Kraus factor")
    m, n = mats[0].shape
    for K in mats:
        if K.shape != (m, n):
            raise DimensionMismatchError(
                f"inconsistent Kraus shapes: {K.shape} vs {(m, n)}"
            )
    gram = sum(K.conj().T @ K for K in mats)
    residual = float(np.linalg.norm(gram - np.eye(n)))
    if residual > tol * max(1.0, float(np.linalg.norm(gram))):
        raise ValidationError(
            f"channel is not unital: ||sum K*K - I|| = {residual:.3e}"
        )
    return KrausChannel(mats)


def random_unital_cp(m: int, n: int, kraus_count: int, seed) -> KrausChannel:
    """Random unital CP map M_m -> M_n from a Haar-ish isometry.

    A Ginibre (m * kraus_count, n) matrix is QR-orthonormalized and sliced
    into kraus_count blocks of m rows, so sum K_i* K_i = I_n to round-off.
    Deterministic for a fixed seed.
    """
    if kraus_count < 1:
        raise ValidationError(f"kraus_count must be >= 1, got {kraus_count}")
    if m * kraus_count < n:
        raise ValidationError(
            f"no isometry C^{n} -> C^{m * kraus_count}: need m * kraus_count >= n"
        )
    rng = np.random.default_rng(seed)
    G = rng.standard_normal((m * kraus_count, n)) + 1j * rng.standard_normal(
        (m * kraus_count, n)
    )
    Q, _ = np.linalg.qr(G)
    return from_kraus([Q[i * m : (i + 1) * m, :] for i in range(kraus_count)])


def apply(channel, x) -> np.ndarray:
    """Heisenberg action of a channel or superoperator map on an element."""
    x = as_square_matrix(x, "element")
    if isinstance(channel, KrausChannel):
        if x.shape[0] != channel.source_dim:
            raise DimensionMismatchError(
                f"element dim {x.shape[0]} does not match source {channel.source_dim}"
            )
        out = np.zeros((channel.target_dim, channel.target_dim), dtype=complex)
        for K in channel.kraus:
            out += K.conj().T @ x @ K
        return out
    if x.shape[0] != channel.source_dim:
        raise DimensionMismatchError(
            f"element dim {x.shape[0]} does not match source {channel.source_dim}"
        )
    return unvec(channel.superoperator() @ vec(x), channel.target_dim)


def pullback_state(omega: State, channel: KrausChannel) -> State:
    """State induced on the source algebra: a -> omega(Phi(a)).

    The density is the Schroedinger dual sum K_i rho K_i*, which preserves
    the trace exactly by unitality.
    """
    if not isinstance(channel, KrausChannel):
        raise ValidationError("state pullback needs a Kraus channel")
    if omega.dim != channel.target_dim:
        raise DimensionMismatchError(
            f"state dim {omega.dim} does not match channel target {channel.target_dim}"
        )
    rho = np.zeros((channel.source_dim, channel.source_dim), dtype=complex)
    for K in channel.kraus:
        rho += K @ omega.density @ K.conj().T
    return State(
        AlgebraDescriptor.full(channel.source_dim),
        hermitian_part(rho),
        omega.normalized,
    )


def schwarz_defect(channel, a) -> tuple[np.ndarray, float]:
    """Difference Phi(a* a) - Phi(a)* Phi(a) and its minimal eigenvalue."""
    a = as_square_matrix(a, "element")
    fa = apply(channel, a)
    faa = apply(channel, a.conj().T @ a)
    diff = hermitian_part(faa - fa.conj().T @ fa)
    lam = float(np.linalg.eigvalsh(diff)[0])
    return diff, lam


@dataclass(frozen=True)
class SchwarzReport:
    passed: bool
    trials: int
    witness: np.ndarray | None
    min_eigenvalue: float  # most negative defect eigenvalue seen (or the overall min)


def check_schwarz(
    channel,
    trials: int = 1000,
    seed=0,
    slack: float = SCHWARZ_SLACK,
    unit_trials_first: bool = True,
) -> SchwarzReport:
    """Randomized test of Phi(a*) Phi(a) <= Phi(a* a).

    Matrix units are tried first (they expose the canonical violations
    deterministically), then complex Ginibre samples.  Returns the first
    violating witness with the negative eigenvalue, or a pass report.
    """
    if isinstance(channel, LinearMapOnAlgebra) and not channel.adjoint_preserving:
        raise ValidationError("Schwarz check requires an adjoint-preserving map")
    m = channel.source_dim
    rng = np.random.default_rng(seed)
    candidates = []
    if unit_trials_first:
        for i in range(m):
            for j in range(m):
                E = np.zeros((m, m), dtype=complex)
                E[i, j] = 1.0
                candidates.append(E)
    worst = np.inf
    count = 0
    for a in candidates:
        count += 1
        _, lam = schwarz_defect(channel, a)
        worst = min(worst, lam)
        if lam < -slack:
            return SchwarzReport(False, count, a, lam)
    for _ in range(trials):
        count += 1
        a = (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) / np.sqrt(2)
        _, lam = schwarz_defect(channel, a)
        worst = min(worst, lam)
        if lam < -slack:
            return SchwarzReport(False, count, a, lam)
    return SchwarzReport(True, count, None, float(worst))


@dataclass(frozen=True)
class PositivityReport:
    unital: bool
    unital_residual: float
    positive: bool
    witness: np.ndarray | None
    min_eigenvalue: float


def check_positive_unital(
    channel, trials: int = 200, seed=0, slack: float = SCHWARZ_SLACK
) -> PositivityReport:
    """Verify Phi(e) = e and that PSD samples stay PSD."""
    m = channel.source_dim
    n = channel.target_dim
    unital_residual = float(
        np.linalg.norm(apply(channel, np.eye(m)) - np.eye(n))
    )
    rng = np.random.default_rng(seed)
    worst = np.inf
    for _ in range(trials):
        G = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
        x = G @ G.conj().T / m
        lam = float(np.linalg.eigvalsh(hermitian_part(apply(channel, x)))[0])
        worst = min(worst, lam)
        if lam < -slack * max(1.0, float(np.linalg.norm(x))):
            return PositivityReport(
                unital_residual <= 1e-10, unital_residual, False, x, lam
            )
    return PositivityReport(
        unital_residual <= 1e-10, unital_residual, True, None, float(worst)
    )


def transpose_map(n: int) -> LinearMapOnAlgebra:
    """Superoperator of x -> x^T: the canonical positive unital map that
    fails the Schwarz inequality for n >= 2."""
    if n < 1:
        raise ValidationError(f"dimension must be positive, got {n}")
    S = np.zeros((n * n, n * n))
    for i in range(n):
        for j in range(n):
            S[i + n * j, j + n * i] = 1.0
    return LinearMapOnAlgebra(n, n, S.astype(complex), adjoint_preserving=True)


def embed_tensor_identity(m: int, k: int) -> KrausChannel:
    """The *-homomorphism x -> x kron I_k from M_m into M_{m k}; its dual is
    the partial trace over the second factor."""
    if m < 1 or k < 1:
        raise ValidationError(f"dimensions must be positive, got m={m}, k={k}")
    kraus = []
    for i in range(k):
        e = np.zeros((1, k))
        e[0, i] = 1.0
        kraus.append(np.kron(np.eye(m), e))
    return from_kraus(kraus)


def pinching_channel(projectors) -> KrausChannel:
    """Channel sum_i P_i x P_i for orthogonal projectors resolving the
    identity; self-dual."""
    return from_kraus([np.asarray(P, dtype=complex) for P in projectors])


def diagonal_pinching(n: int) -> KrausChannel:
    eye = np.eye(n, dtype=complex)
    return pinching_channel([np.outer(eye[:, i], eye[:, i]) for i in range(n)])


def injection_channel(
    sub: AlgebraDescriptor, parent_dim: int, assignment
) -> KrausChannel:
    """Subalgebra injection for a single-block descriptor as a KrausChannel
    M_d -> M_n (each Kraus factor selects one parent tile).

    Multi-block descriptors have no Kraus form on the full matrix space of
    the sub dimension; use subalgebra_injection for those.
    """
    if len(sub.block_dims) != 1:
        raise ValidationError(
            "Kraus form exists only for single-block descriptors; "
            f"got blocks {sub.block_dims}"
        )
    d = sub.block_dims[0]
    assignment = tuple(int(a) for a in assignment)
    if any(a != 0 for a in assignment) or len(assignment) * d != parent_dim:
        raise ValidationError(
            f"assignment {assignment} does not tile parent dim {parent_dim} "
            f"with copies of a {d}-dim block"
        )
    kraus = []
    for j in range(len(assignment)):
        K = np.zeros((d, parent_dim), dtype=complex)
        K[:, j * d : (j + 1) * d] = np.eye(d)
        kraus.append(K)
    return from_kraus(kraus)


@dataclass(frozen=True)
class FormGapReport:
    frobenius_gap: float
    loewner_holds: bool
    min_eigenvalue: float


def pullback_form_vs_state_form_gap(
    channel: KrausChannel, omega: State, tol: float = 1e-9
) -> FormGapReport:
    """Compare the pullback of the right form of omega with the right form
    of the pulled-back state.

    The two coincide exactly for *-homomorphisms; for a general unital CP
    map they differ, but the pullback stays below in the Loewner order (the
    Schwarz inequality evaluated against omega).
    """
    if omega.dim != channel.target_dim:
        raise DimensionMismatchError(
            f"state dim {omega.dim} does not match channel target {channel.target_dim}"
        )
    S = channel.superoperator()
    pulled_form = S.conj().T @ np.kron(
        np.eye(channel.target_dim), omega.density
    ) @ S
    state_form = np.kron(
        np.eye(channel.source_dim), pullback_state(omega, channel).density
    )
    gap = float(np.linalg.norm(pulled_form - state_form))
    res = loewner_leq(hermitian_part(pulled_form), hermitian_part(state_form), tol)
    return FormGapReport(gap, res.holds, res.min_eigenvalue)


def injection_form_gap(
    sub: AlgebraDescriptor, parent_dim: int, assignment, omega: State
) -> float:
    """Frobenius gap between the two routes for a subalgebra injection,
    compared on the intrinsic coordinates of the sub-algebra (where the
    injection is a genuine *-homomorphism); zero up to round-off."""
    J = subalgebra_injection(sub, parent_dim, assignment)
    pulled_form = J.conj().T @ np.kron(np.eye(parent_dim), omega.density) @ J
    rho = injection_pullback_density(sub, parent_dim, assignment, omega.density)
    J_sub = subalgebra_injection(sub, sub.dim, tuple(range(len(sub.block_dims))))
    state_form = J_sub.conj().T @ np.kron(np.eye(sub.dim), rho) @ J_sub
    return float(np.linalg.norm(pulled_form - state_form))


def pullback_interpolation_intrinsic(
    sub: AlgebraDescriptor,
    parent_dim: int,
    assignment,
    omega: State,
    nu: State,
    t: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Both sides of the chain inequality for an injection, as matrices on
    the intrinsic coordinates of the sub-algebra: the pullback of gamma_t
    (lhs) and the gamma_t of the pulled-back forms (rhs).

    lhs <= rhs in the Loewner order; equality holds for isomorphisms onto
    the full algebra but is strict for proper injections in general (the
    compression of the representation does not commute with the functional
    calculus)."""
    from .algebra import form_left, form_right
    from .qforms import interpolate, pullback_form

    J = subalgebra_injection(sub, parent_dim, assignment)
    gamma = interpolate(form_right(omega), form_left(nu), t)
    lhs = pullback_form(gamma, J).matrix
    p_pulled = pullback_form(form_right(omega), J)
    q_pulled = pullback_form(form_left(nu), J)
    rhs = interpolate(p_pulled, q_pulled, t).matrix
    return lhs, rhs
