import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from formcalc.hermlin import (
    DimensionMismatchError,
    NotPSDError,
    SpectralDomainError,
    ValidationError,
    apply_hermitian_function,
    apply_spectral_function,
    herm_eig,
    hermitian_part,
    loewner_leq,
    matrix_log_support,
    matrix_pinv,
    matrix_power,
    matrix_sqrt,
    psd_project,
    support_projector,
    validate_hermitian,
)


def random_hermitian(rng, d):
    G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return hermitian_part(G)


def random_psd(rng, d, rank=None):
    rank = rank or d
    G = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    return G @ G.conj().T


class TestHermEig:
    def test_2x2_symmetric_closed_form(self):
        dec = herm_eig([[2.0, 1.0], [1.0, 2.0]])
        assert np.allclose(dec.eigenvalues, [1.0, 3.0])

    def test_sum_of_worked_pair(self):
        # eigenvalues of [[4, 1+i], [1-i, 4]] are 4 -/+ sqrt(2)
        A = np.array([[4.0, 1.0 + 1.0j], [1.0 - 1.0j, 4.0]])
        dec = herm_eig(A)
        assert np.allclose(
            dec.eigenvalues, [2.585786437626905, 5.414213562373095], atol=1e-12
        )

    def test_identity(self):
        dec = herm_eig(np.eye(3))
        assert np.allclose(dec.eigenvalues, 1.0)

    def test_non_hermitian_error_names_entry(self):
        with pytest.raises(ValidationError, match=r"\(0,1\)"):
            herm_eig([[1.0, 2.0], [0.0, 1.0]])

    def test_non_square_error(self):
        with pytest.raises(DimensionMismatchError):
            herm_eig(np.ones((2, 3)))

    @pytest.mark.parametrize("d", [2, 5, 16, 64])
    def test_reconstruction_and_unitarity(self, d):
        rng = np.random.default_rng(d)
        A = random_hermitian(rng, d)
        dec = herm_eig(A)
        V, w = dec.eigenvectors, dec.eigenvalues
        assert np.all(np.diff(w) >= 0)
        scale = np.linalg.norm(A)
        assert np.linalg.norm(A @ V - V * w) <= 1e-12 * max(scale, 1.0)
        assert np.linalg.norm(V.conj().T @ V - np.eye(d)) <= 1e-12 * d

    def test_phase_fixing_deterministic(self):
        rng = np.random.default_rng(0)
        A = random_hermitian(rng, 4)
        d1 = herm_eig(A)
        d2 = herm_eig(A.copy())
        assert np.array_equal(d1.eigenvectors, d2.eigenvectors)
        for k in range(4):
            col = d1.eigenvectors[:, k]
            pivot = col[np.argmax(np.abs(col))]
            assert pivot.real > 0 and abs(pivot.imag) < 1e-14


class TestSpectralFunctions:
    def test_sqrt_diagonal(self):
        assert np.allclose(matrix_sqrt(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]))

    def test_power_zero_convention(self):
        out = matrix_power(np.diag([0.0, 2.0]), 0.5)
        assert np.allclose(out, np.diag([0.0, np.sqrt(2.0)]))

    def test_power_zero_exponent_is_identity(self):
        out = matrix_power(np.diag([0.0, 2.0]), 0.0)
        assert np.allclose(out, np.eye(2))

    def test_log_exp_round_trip(self):
        rng = np.random.default_rng(7)
        A = random_psd(rng, 4)
        back = apply_hermitian_function(matrix_log_support(A), np.exp)
        assert np.linalg.norm(back - A) <= 1e-10 * np.linalg.norm(A)

    def test_pinv(self):
        A = np.diag([0.0, 2.0, 4.0])
        out = matrix_pinv(A)
        assert np.allclose(out, np.diag([0.0, 0.5, 0.25]))

    def test_support_projector(self):
        rng = np.random.default_rng(3)
        A = random_psd(rng, 5, rank=3)
        P = support_projector(A)
        assert np.linalg.norm(P @ P - P) < 1e-12
        assert abs(np.trace(P).real - 3) < 1e-9
        assert np.linalg.norm(P @ A - A) < 1e-10 * np.linalg.norm(A)

    def test_not_psd_error(self):
        with pytest.raises(NotPSDError):
            matrix_sqrt([[1.0, 2.0], [2.0, 1.0]])

    def test_domain_error_on_nan(self):
        with pytest.raises(SpectralDomainError):
            apply_spectral_function(np.diag([0.0, 1.0]), np.log)

    @settings(max_examples=30, deadline=None)
    @given(
        s=st.floats(min_value=0.1, max_value=2.0),
        t=st.floats(min_value=0.1, max_value=2.0),
        seed=st.integers(min_value=0, max_value=10_000),
    )
    def test_power_composition(self, s, t, seed):
        rng = np.random.default_rng(seed)
        A = random_psd(rng, 3)
        direct = matrix_power(A, s * t)
        composed = matrix_power(matrix_power(A, s), t)
        assert np.linalg.norm(direct - composed) <= 1e-10 * max(
            1.0, np.linalg.norm(direct)
        )


class TestPsdProject:
    def test_psd_unchanged(self):
        out = psd_project(np.diag([0.7, 0.3]))
        assert np.allclose(out.matrix, np.diag([0.7, 0.3]))
        assert out.clipped == ()

    def test_indefinite_error(self):
        with pytest.raises(NotPSDError, match="-1"):
            psd_project([[1.0, 2.0], [2.0, 1.0]])

    def test_clip_small_negative(self):
        out = psd_project(np.diag([1.0, -1e-14]), tol=1e-10)
        assert np.allclose(out.matrix, np.diag([1.0, 0.0]), atol=1e-13)
        assert len(out.clipped) == 1
        assert out.clipped[0] == pytest.approx(-1e-14, rel=1e-6)


class TestLoewner:
    def test_comparable(self):
        assert loewner_leq(np.diag([1.0, 1.0]), np.diag([2.0, 1.0]), 1e-10).holds

    def test_incomparable_with_witness(self):
        res = loewner_leq(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]), 1e-10)
        assert not res.holds
        assert res.min_eigenvalue == pytest.approx(-1.0)
        # the witness is the direction where B - A is most negative
        v = res.witness
        assert abs(v.conj() @ (np.diag([-1.0, 1.0]) @ v) + 1.0) < 1e-12

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            loewner_leq(np.eye(2), np.eye(3), 1e-10)

    @pytest.mark.parametrize("seed", range(5))
    def test_transitivity_chain(self, seed):
        rng = np.random.default_rng(seed)
        A = random_psd(rng, 4)
        B = A + random_psd(rng, 4)
        C = B + random_psd(rng, 4)
        tol = 1e-10
        assert loewner_leq(A, B, tol).holds
        assert loewner_leq(B, C, tol).holds
        assert loewner_leq(A, C, 3 * tol).holds


def test_validate_hermitian_accepts_noise():
    A = np.array([[1.0, 0.5 + 1e-13j], [0.5, 1.0]])
    validate_hermitian(A)
