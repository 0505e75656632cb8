import math

import numpy as np
import pytest

from formcalc.algebra import AlgebraDescriptor, State, form_left, form_right, make_state, vec
from formcalc.entropy import (
    LimitSchedule,
    gamma_states,
    relative_entropy,
    relative_entropy_functional,
    relative_entropy_limit,
    support_mass_outside,
)
from formcalc.hermlin import DimensionMismatchError, ValidationError
from formcalc.qforms import evaluate_form, interpolate

# frozen oracle values
KL_QUBIT = 0.14384103622589042  # (1/2) ln(4/3), classical KL on the diagonals
GAMMA_HALF = 0.9659258262890682  # sqrt(3/8) + sqrt(1/8), scalar closed form
S_FUNC_E11 = -0.2027325540540822  # (1/2)(ln 1/2 - ln 3/4), derivative at 0


def full_state(density):
    density = np.asarray(density, dtype=complex)
    return make_state(AlgebraDescriptor.full(density.shape[0]), density)


def random_full_state(rng, d):
    G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = G @ G.conj().T
    return full_state(rho / np.trace(rho).real)


OMEGA = full_state(np.diag([0.5, 0.5]))
NU = full_state(np.diag([0.75, 0.25]))


class TestGammaStates:
    def test_same_state_on_identity(self):
        e = np.eye(2)
        for t in (0.0, 0.3, 0.7, 1.0):
            assert gamma_states(OMEGA, OMEGA, t, e, e) == pytest.approx(1.0)

    def test_scalar_closed_form(self):
        e = np.eye(2)
        val = gamma_states(OMEGA, NU, 0.5, e, e)
        assert val.real == pytest.approx(GAMMA_HALF, abs=1e-12)
        assert val.imag == pytest.approx(0.0, abs=1e-14)

    def test_endpoint_is_trace(self):
        e = np.eye(2)
        assert gamma_states(OMEGA, NU, 0.0, e, e) == pytest.approx(1.0)

    def test_matches_quotient_route(self):
        rng = np.random.default_rng(0)
        for d in (2, 3):
            omega = random_full_state(rng, d)
            nu = random_full_state(rng, d)
            p, q = form_right(omega), form_left(nu)
            for t in (0.0, 0.25, 0.5, 0.8, 1.0):
                gamma = interpolate(p, q, t)
                for _ in range(5):
                    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
                    b = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
                    assert abs(
                        gamma_states(omega, nu, t, a, b)
                        - evaluate_form(gamma, vec(a), vec(b))
                    ) < 1e-10

    def test_bad_t(self):
        with pytest.raises(ValidationError):
            gamma_states(OMEGA, NU, -0.1, np.eye(2), np.eye(2))

    def test_shape_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            gamma_states(OMEGA, NU, 0.5, np.eye(3), np.eye(2))


class TestRelativeEntropyClosed:
    def test_equal_states(self):
        assert relative_entropy(OMEGA, OMEGA) == pytest.approx(0.0, abs=1e-14)

    def test_classical_qubit_pair(self):
        assert relative_entropy(OMEGA, NU) == pytest.approx(KL_QUBIT, abs=1e-12)

    def test_support_violation_is_infinite(self):
        nu = full_state(np.diag([1.0, 0.0]))
        assert math.isinf(relative_entropy(OMEGA, nu))
        assert support_mass_outside(OMEGA, nu) == pytest.approx(0.5)

    def test_contained_support_finite(self):
        omega = full_state(np.diag([1.0, 0.0]))
        nu = full_state(np.diag([0.75, 0.25]))
        expected = 1.0 * (np.log(1.0) - np.log(0.75))
        assert relative_entropy(omega, nu) == pytest.approx(expected, abs=1e-12)

    def test_diagonal_reduces_to_kl(self):
        rng = np.random.default_rng(1)
        for d in (2, 4, 6):
            p = rng.uniform(0.1, 1.0, d)
            p /= p.sum()
            q = rng.uniform(0.1, 1.0, d)
            q /= q.sum()
            kl = float(np.sum(p * (np.log(p) - np.log(q))))
            val = relative_entropy(full_state(np.diag(p)), full_state(np.diag(q)))
            assert val == pytest.approx(kl, abs=1e-10)

    def test_nonnegative_for_normalized(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            d = int(rng.integers(2, 5))
            val = relative_entropy(random_full_state(rng, d), random_full_state(rng, d))
            assert val >= -1e-10

    def test_algebra_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            relative_entropy(OMEGA, full_state(np.eye(3) / 3))

    def test_unitary_invariance(self):
        rng = np.random.default_rng(3)
        omega = random_full_state(rng, 3)
        nu = random_full_state(rng, 3)
        U, _ = np.linalg.qr(rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)))
        rotated_o = full_state(U @ omega.density @ U.conj().T)
        rotated_n = full_state(U @ nu.density @ U.conj().T)
        assert relative_entropy(rotated_o, rotated_n) == pytest.approx(
            relative_entropy(omega, nu), abs=1e-10
        )


class TestLimitSchedule:
    def test_default(self):
        s = LimitSchedule()
        assert len(s.t_values) == 20
        assert s.t_values[0] == 0.5
        assert all(b < a for a, b in zip(s.t_values, s.t_values[1:]))

    def test_invalid_values(self):
        with pytest.raises(ValidationError):
            LimitSchedule(t_values=(0.5, 0.6))
        with pytest.raises(ValidationError):
            LimitSchedule(t_values=(1.5,))
        with pytest.raises(ValidationError):
            LimitSchedule(t_values=(0.5, 0.25), extrapolation="quadratic")


class TestLimitEstimator:
    def test_qubit_pair(self):
        est, diag = relative_entropy_limit(OMEGA, NU)
        assert est == pytest.approx(KL_QUBIT, abs=1e-5)
        assert diag.converged and not diag.diverged

    def test_equal_states_zero_at_every_t(self):
        est, diag = relative_entropy_limit(OMEGA, OMEGA)
        assert est == pytest.approx(0.0, abs=1e-10)
        # each quotient is zero up to the 1e-16 / t cancellation floor
        for t, q in zip(diag.t_values, diag.quotients):
            assert abs(q) < 1e-13 / t

    def test_support_violation_flags_divergence(self):
        nu = full_state(np.diag([1.0, 0.0]))
        est, diag = relative_entropy_limit(OMEGA, nu)
        assert math.isinf(est)
        assert diag.diverged

    @pytest.mark.parametrize("seed", range(10))
    @pytest.mark.parametrize("d", [2, 4, 6])
    def test_matches_closed_form(self, seed, d):
        rng = np.random.default_rng((seed, d))
        omega = random_full_state(rng, d)
        nu = random_full_state(rng, d)
        closed = relative_entropy(omega, nu)
        est, diag = relative_entropy_limit(omega, nu)
        assert est == pytest.approx(closed, abs=1e-5)
        assert not diag.liminf_flag

    def test_no_extrapolation_still_close(self):
        schedule = LimitSchedule(extrapolation="none")
        est, _ = relative_entropy_limit(OMEGA, NU, schedule)
        assert est == pytest.approx(KL_QUBIT, abs=1e-4)

    def test_diagnostics_table_shape(self):
        _, diag = relative_entropy_limit(OMEGA, NU)
        assert len(diag.t_values) == len(diag.quotients) == len(diag.extrapolated) == 20
        assert diag.tail_min is not None


class TestFunctionalEstimator:
    def test_reduces_to_entropy_at_identity(self):
        e = np.eye(2)
        val, _ = relative_entropy_functional(OMEGA, NU, e, e)
        assert np.real(val) == pytest.approx(KL_QUBIT, abs=1e-5)

    def test_matrix_unit_derivative(self):
        a = np.zeros((2, 2))
        a[0, 0] = 1.0
        val, _ = relative_entropy_functional(OMEGA, NU, a, a)
        assert np.real(val) == pytest.approx(S_FUNC_E11, abs=1e-6)
        assert abs(np.imag(val)) < 1e-8

    def test_sesquilinear_scaling(self):
        a = np.zeros((2, 2))
        a[0, 0] = 1.0
        base, _ = relative_entropy_functional(OMEGA, NU, a, a)
        scaled, _ = relative_entropy_functional(OMEGA, NU, 2j * a, 2j * a)
        assert scaled == pytest.approx(4.0 * base, abs=1e-8)
