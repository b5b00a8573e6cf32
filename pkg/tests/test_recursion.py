import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import HALF_PI, R2, U_XY, U_YY
from grover_nmr.errors import DefectiveMatrixError, ValidationError, VanishingAmplitudeError
from grover_nmr.grover import run_iterations, two_spin_rotation, walsh_hadamard
from grover_nmr.recursion import (
    Weights,
    amplitudes_at,
    averages_at,
    eigensystem_2x2,
    find_target_iteration,
    power_period,
    transfer_matrix,
    weights,
)
from grover_nmr.sampling import random_instance

S3 = math.sqrt(3)
A_MINUS = 0.5 * np.array([[1 + 1j, 1 + 1j], [1 - 1j, 1j - 1]])
HALF = Weights(0.5, 0.5)


def step_primed(U, s, marked, beta, gamma, n):
    """Step the per-state primed amplitudes one iteration at a time (no averaging shortcut)."""
    col = U[:, s]
    p = np.abs(col) ** 2
    mk = np.zeros(len(col), dtype=bool)
    mk[list(marked)] = True
    w_k, w_l = p[mk].sum(), p[~mk].sum()
    primed = np.ones(len(col), dtype=complex)
    eg, d = cmath.exp(1j * gamma), 1 - cmath.exp(1j * beta)
    for _ in range(n):
        kbar = (p[mk] * primed[mk]).sum() / w_k
        lbar = (p[~mk] * primed[~mk]).sum() / w_l
        common = eg * d * w_k * kbar + d * w_l * lbar
        primed = np.where(mk, common - eg * primed, common - primed)
    return primed


class TestWeights:
    def test_reference_u(self):
        w = weights(U_YY, 0, [0, 3])
        assert (w.marked, w.unmarked) == pytest.approx((0.5, 0.5), abs=1e-15)

    def test_all_marked(self):
        w = weights(U_XY, 0, range(4))
        assert (w.marked, w.unmarked) == pytest.approx((1.0, 0.0), abs=1e-15)

    def test_xy_u(self):
        w = weights(U_XY, 0, [0, 3])
        assert (w.marked, w.unmarked) == pytest.approx((0.5, 0.5), abs=1e-15)

    def test_invariant(self):
        with pytest.raises(ValidationError):
            Weights(0.5, 0.6)


class TestTransferMatrix:
    def test_minus_half_pi(self):
        tm = transfer_matrix(-HALF_PI, -HALF_PI, HALF)
        np.testing.assert_allclose(tm.matrix, A_MINUS, atol=1e-15)
        np.testing.assert_allclose(tm.eigenvalues, [cmath.exp(1j * math.pi / 6), cmath.exp(5j * math.pi / 6)], atol=1e-15)

    def test_plus_half_pi_is_conjugate(self):
        tm = transfer_matrix(HALF_PI, HALF_PI, HALF)
        np.testing.assert_allclose(tm.matrix, A_MINUS.conj(), atol=1e-15)

    @given(gamma=st.floats(0.1, 6.1), w=st.floats(0, 1))
    def test_beta_zero_diagonal(self, gamma, w):
        tm = transfer_matrix(0.0, gamma, Weights(w, 1 - w))
        np.testing.assert_allclose(tm.matrix, np.diag([-cmath.exp(1j * gamma), -1]), atol=1e-15)

    def test_scalar_matrix_allowed(self):
        tm = transfer_matrix(0.0, 0.0, HALF)
        assert averages_at(tm, 5) == pytest.approx((-1, -1))

    def test_defective_raises(self):
        with pytest.raises(DefectiveMatrixError) as err:
            eigensystem_2x2([[1, 1], [0, 1]])
        assert err.value.eigenvalue == pytest.approx(1)

    def test_closed_form_similarity_diagonalizes(self):
        S = np.array([[1, 1], [(S3 - 1) / (1 + 1j), -(S3 + 1) / (1 + 1j)]])
        S_inv = np.array([[(S3 + 1) / (2 * S3), (1 + 1j) / (2 * S3)], [(S3 - 1) / (2 * S3), -(1 + 1j) / (2 * S3)]])
        np.testing.assert_allclose(S_inv @ S, np.eye(2), atol=1e-14)
        lam = [cmath.exp(1j * math.pi / 6), cmath.exp(5j * math.pi / 6)]
        np.testing.assert_allclose(S_inv @ A_MINUS @ S, np.diag(lam), atol=1e-14)

    @settings(max_examples=60, deadline=None)
    @given(beta=st.floats(0, 2 * math.pi), gamma=st.floats(0, 2 * math.pi), w=st.floats(0.01, 0.99))
    def test_similarity_reconstructs(self, beta, gamma, w):
        try:
            tm = transfer_matrix(beta, gamma, Weights(w, 1 - w))
        except DefectiveMatrixError:
            return
        recon = tm.similarity @ np.diag(tm.eigenvalues) @ tm.inverse_similarity
        np.testing.assert_allclose(recon, tm.matrix, atol=1e-10)


class TestAverages:
    def test_first_iteration(self):
        kbar, lbar = averages_at(transfer_matrix(-HALF_PI, -HALF_PI, HALF), 1)
        assert kbar == pytest.approx(math.sqrt(2) * cmath.exp(1j * math.pi / 4), abs=1e-14)
        assert abs(lbar) < 1e-14

    def test_zero(self):
        assert averages_at(transfer_matrix(0.3, 1.1, HALF), 0) == pytest.approx((1, 1), abs=1e-14)

    def test_negative(self):
        with pytest.raises(ValidationError):
            averages_at(transfer_matrix(0.3, 1.1, HALF), -1)

    @pytest.mark.parametrize("n", range(13))
    def test_period_three(self, n):
        tm = transfer_matrix(-HALF_PI, -HALF_PI, HALF)
        np.testing.assert_allclose(tm.power(n + 3), 1j * tm.power(n), atol=1e-10)
        tm_plus = transfer_matrix(HALF_PI, HALF_PI, HALF)
        np.testing.assert_allclose(tm_plus.power(n + 3), -1j * tm_plus.power(n), atol=1e-10)

    def test_power_period_detects_three(self):
        p, c = power_period(transfer_matrix(-HALF_PI, -HALF_PI, HALF))
        assert p == 3 and c == pytest.approx(1j, abs=1e-12)

    @pytest.mark.parametrize("n", range(20))
    def test_closed_form_power(self, n):
        e1, e5 = cmath.exp(1j * n * math.pi / 6), cmath.exp(5j * n * math.pi / 6)
        An = np.array(
            [
                [(S3 + 1) * e1 + (S3 - 1) * e5, (1 + 1j) * (e1 - e5)],
                [(1 - 1j) * (e1 - e5), (S3 - 1) * e1 + (S3 + 1) * e5],
            ]
        ) / (2 * S3)
        tm = transfer_matrix(-HALF_PI, -HALF_PI, HALF)
        np.testing.assert_allclose(tm.power(n), An, atol=1e-12)
        np.testing.assert_allclose(averages_at(tm, n), An @ [1, 1], atol=1e-12)

    def test_stepwise_recursion_agrees(self, rng):
        for _ in range(20):
            inst = random_instance(rng, dims=(4, 8, 16))
            tm = transfer_matrix(inst.beta, inst.gamma, weights(inst.U, inst.source, inst.marked))
            mk = list(inst.marked)
            um = [i for i in range(inst.dim) if i not in inst.marked]
            for n in (0, 1, 2, 7, 23, 50):
                primed = step_primed(inst.U, inst.source, inst.marked, inst.beta, inst.gamma, n)
                kbar, lbar = averages_at(tm, n)
                assert np.max(np.abs(primed[mk] - kbar)) < 1e-10
                assert np.max(np.abs(primed[um] - lbar)) < 1e-10


class TestAmplitudes:
    def test_psi1(self):
        tr = amplitudes_at(U_YY, 0, [0, 3], -HALF_PI, -HALF_PI, 1)
        expected = cmath.exp(1j * math.pi / 4) * R2
        assert tr.marked_amplitudes == pytest.approx({0: expected, 3: expected}, abs=1e-14)
        assert max(abs(v) for v in tr.unmarked_amplitudes.values()) < 1e-14

    def test_psi2(self):
        U = two_spin_rotation(("y", "y"), (-HALF_PI, HALF_PI))
        assert U[0, 0] == pytest.approx(0.5) and U[3, 0] == pytest.approx(-0.5)
        tr = amplitudes_at(U, 0, [0, 3], -HALF_PI, -HALF_PI, 1)
        expected = cmath.exp(1j * math.pi / 4) * R2
        assert tr.marked_amplitudes == pytest.approx({0: expected, 3: -expected}, abs=1e-14)

    def test_vanishing_entry(self):
        with pytest.raises(VanishingAmplitudeError) as err:
            amplitudes_at(np.eye(4), 0, [0], 1.0, 1.0, 1)
        assert err.value.index == 1

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), n=st.integers(0, 30))
    def test_matches_state_vector(self, seed, n):
        inst = random_instance(np.random.default_rng(seed), dims=(4, 8, 16))
        tr = amplitudes_at(inst.U, inst.source, inst.marked, inst.beta, inst.gamma, n)
        sv = run_iterations(inst.U, inst.source, inst.marked, inst.beta, inst.gamma, n)
        assert np.max(np.abs(tr.amplitudes - sv)) < 1e-9
        assert abs(np.sum(np.abs(tr.amplitudes) ** 2) - 1) < 1e-10

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), n=st.integers(0, 30))
    def test_equal_primed_amplitudes(self, seed, n):
        inst = random_instance(np.random.default_rng(seed), dims=(4, 8, 16))
        sv = run_iterations(inst.U, inst.source, inst.marked, inst.beta, inst.gamma, n)
        primed = sv / inst.U[:, inst.source]
        mk = list(inst.marked)
        um = [i for i in range(inst.dim) if i not in inst.marked]
        assert np.ptp(primed[mk].real) < 1e-9 and np.ptp(primed[mk].imag) < 1e-9
        assert np.ptp(primed[um].real) < 1e-9 and np.ptp(primed[um].imag) < 1e-9

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_only_magnitudes_matter(self, seed):
        rng = np.random.default_rng(seed)
        inst = random_instance(rng, dims=(4, 8))
        # rephase rows: |U'[i,s]| = |U[i,s]|, still unitary
        D = np.diag(np.exp(2j * np.pi * rng.random(inst.dim)))
        U2 = D @ inst.U
        for n in (1, 4, 17):
            a = amplitudes_at(inst.U, inst.source, inst.marked, inst.beta, inst.gamma, n)
            b = amplitudes_at(U2, inst.source, inst.marked, inst.beta, inst.gamma, n)
            assert abs(a.kbar - b.kbar) < 1e-10 and abs(a.lbar - b.lbar) < 1e-10


class TestTarget:
    def test_psi1_target(self):
        n0, state = find_target_iteration(U_YY, 0, [0, 3], -HALF_PI, -HALF_PI, 10)
        assert n0 == 1
        np.testing.assert_allclose(state, cmath.exp(1j * math.pi / 4) * np.array([R2, 0, 0, R2]), atol=1e-12)

    @pytest.mark.parametrize("target", range(4))
    def test_original_grover(self, target):
        n0, state = find_target_iteration(walsh_hadamard(2), 0, [target], math.pi, math.pi, 10)
        assert n0 == 1
        sv = run_iterations(walsh_hadamard(2), 0, [target], math.pi, math.pi, 1)
        others = [i for i in range(4) if i != target]
        assert np.max(np.abs(sv[others])) < 1e-15
        assert abs(state[target]) == pytest.approx(1)

    def test_beta_zero_absent(self):
        assert find_target_iteration(U_YY, 0, [0, 3], 0.0, 0.7, 50) is None


def test_all_marked_original_grover_is_defective():
    # W_l rounds to ~1e-16 rather than 0; must still be recognised as defective
    with pytest.raises(DefectiveMatrixError):
        transfer_matrix(math.pi, math.pi, weights(walsh_hadamard(2), 0, range(4)))
