"""Deterministic random generators used by the verification suites.

Every generator takes an explicit seed (an int or a tuple of ints fed to
numpy's SeedSequence), so parallel and serial suite runs see identical
streams.
"""

from __future__ import annotations

import numpy as np

from ..algebra import AlgebraDescriptor, State
from ..hermlin import ValidationError, hermitian_part
from ..qforms import QuadraticForm


def rng_for(seed, suite_id: int = 0, trial: int = 0) -> np.random.Generator:
    """Per-trial RNG stream; (seed, suite, trial) determine it completely."""
    return np.random.default_rng([int(seed), int(suite_id), int(trial)])


def ginibre(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return (
        rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
    ) / np.sqrt(2)


def random_density(dim: int, rank: int | None = None, seed=0) -> np.ndarray:
    """PSD trace-one matrix G G* / Tr(G G*) with G a (dim, rank) Ginibre
    sample; rank defaults to dim (full rank almost surely)."""
    rank = dim if rank is None else int(rank)
    if not 1 <= rank <= dim:
        raise ValidationError(f"rank {rank} out of range [1, {dim}]")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    G = ginibre(rng, dim, rank)
    M = G @ G.conj().T
    return hermitian_part(M / np.trace(M).real)


def random_state(dim: int, rank: int | None = None, seed=0) -> State:
    return State(AlgebraDescriptor.full(dim), random_density(dim, rank, seed))


def random_psd_form(rng: np.random.Generator, dim: int, rank: int | None = None) -> QuadraticForm:
    """Random positive form with operator norm of order one."""
    rank = dim if rank is None else rank
    G = ginibre(rng, dim, rank)
    M = G @ G.conj().T
    return QuadraticForm(hermitian_part(M / max(1.0, float(np.linalg.norm(M, ord=2)))))


def random_dominated_pair(
    rng: np.random.Generator, dim: int
) -> tuple[QuadraticForm, QuadraticForm]:
    """A Loewner-ordered pair (small, large): large = small + PSD bump."""
    small = random_psd_form(rng, dim)
    bump = random_psd_form(rng, dim)
    scale = rng.uniform(0.0, 1.0)
    return small, QuadraticForm(hermitian_part(small.matrix + scale * bump.matrix))


def random_vector(rng: np.random.Generator, dim: int) -> np.ndarray:
    return (rng.standard_normal(dim) + 1j * rng.standard_normal(dim)) / np.sqrt(2)


def random_element(rng: np.random.Generator, dim: int) -> np.ndarray:
    return ginibre(rng, dim, dim)
