import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import EPR, HALF_PI, R2, U_XY, U_YY
from grover_nmr._linalg import unitarity_error
from grover_nmr.errors import ValidationError
from grover_nmr.grover import (
    as_marked,
    fidelity,
    grover_operator,
    phase_oracle,
    prepare_initial,
    reflection_about_source,
    run_iterations,
    success_probability,
    two_spin_rotation,
    walsh_hadamard,
)
from grover_nmr.sampling import random_rotation_unitary

angles = st.floats(-2 * math.pi, 2 * math.pi, allow_nan=False)


def naive_matmul(a, b):
    n, m, p = len(a), len(b), len(b[0])
    return [[sum(a[i][k] * b[k][j] for k in range(m)) for j in range(p)] for i in range(n)]


def hadamard_entry(i, j, q):
    return (-1) ** bin(i & j).count("1") / math.sqrt(2**q)


class TestOperators:
    def test_phase_oracle_marked_14(self):
        np.testing.assert_allclose(phase_oracle({0, 3}, -HALF_PI, 4), np.diag([-1j, 1, 1, -1j]), atol=1e-15)

    def test_phase_oracle_marked_23(self):
        np.testing.assert_allclose(phase_oracle([1, 2], HALF_PI, 4), np.diag([1, 1j, 1j, 1]), atol=1e-15)

    def test_phase_oracle_empty(self):
        np.testing.assert_array_equal(phase_oracle([], 0.7, 4), np.eye(4))

    def test_phase_oracle_bad_index(self):
        with pytest.raises(ValidationError):
            phase_oracle([4], 1.0, 4)
        with pytest.raises(ValidationError):
            as_marked([1, 1], 4)

    @pytest.mark.parametrize(
        "beta, diag",
        [(-HALF_PI, [-1j, 1, 1, 1]), (HALF_PI, [1j, 1, 1, 1]), (0.0, [1, 1, 1, 1])],
    )
    def test_reflection(self, beta, diag):
        np.testing.assert_allclose(reflection_about_source(0, beta, 4), np.diag(diag), atol=1e-15)

    def test_reflection_out_of_range(self):
        with pytest.raises(IndexError):
            reflection_about_source(4, 1.0, 4)

    def test_grover_operator_identity_prep(self):
        np.testing.assert_allclose(grover_operator(np.eye(4), 0, math.pi), np.diag([1, -1, -1, -1]), atol=1e-15)

    def test_grover_operator_matches_dense_product(self):
        Is = [[-1j, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
        Ud = U_YY.conj().T.tolist()
        oracle = -np.array(naive_matmul(naive_matmul(U_YY.tolist(), Is), Ud))
        signs = np.array([[1, -1, -1, 1], [-1, 1, 1, -1], [-1, 1, 1, -1], [1, -1, -1, 1]])
        frozen = -np.eye(4) + (1 + 1j) / 4 * signs
        np.testing.assert_allclose(oracle, frozen, atol=1e-15)
        np.testing.assert_allclose(grover_operator(U_YY, 0, -HALF_PI), frozen, atol=1e-15)

    def test_grover_operator_rejects_non_unitary(self):
        with pytest.raises(ValidationError):
            grover_operator(np.ones((4, 4)), 0, 1.0)

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), dim=st.sampled_from([2, 4, 8, 16]), beta=angles, s=st.integers(0, 15))
    def test_grover_operator_unitary(self, seed, dim, beta, s):
        U = random_rotation_unitary(dim, np.random.default_rng(seed), sweeps=1)
        assert unitarity_error(grover_operator(U, s % dim, beta)) < 1e-10


class TestRotations:
    def test_yy_half_pi(self):
        np.testing.assert_allclose(two_spin_rotation(("y", "y"), (HALF_PI, HALF_PI)), U_YY, atol=1e-15)

    def test_xy_half_pi(self):
        np.testing.assert_allclose(two_spin_rotation(("x", "y"), (HALF_PI, HALF_PI)), U_XY, atol=1e-15)

    def test_zero_angles(self):
        np.testing.assert_allclose(two_spin_rotation(("y", "y"), (0, 0)), np.eye(4), atol=1e-15)

    @given(p1=angles, p2=angles)
    def test_yy_closed_form(self, p1, p2):
        c1, s1, c2, s2 = math.cos(p1 / 2), math.sin(p1 / 2), math.cos(p2 / 2), math.sin(p2 / 2)
        expected = np.array(
            [
                [c1 * c2, c1 * s2, s1 * c2, s1 * s2],
                [-c1 * s2, c1 * c2, -s1 * s2, s1 * c2],
                [-s1 * c2, -s1 * s2, c1 * c2, c1 * s2],
                [s1 * s2, -s1 * c2, -c1 * s2, c1 * c2],
            ]
        )
        np.testing.assert_allclose(two_spin_rotation(("y", "y"), (p1, p2)), expected, atol=1e-14)

    def test_bad_axis(self):
        with pytest.raises(ValidationError):
            two_spin_rotation(("z", "y"), (1, 1))

    @pytest.mark.parametrize("q", [1, 2, 3, 4])
    def test_walsh_hadamard_entries(self, q):
        n = 2**q
        expected = np.array([[hadamard_entry(i, j, q) for j in range(n)] for i in range(n)])
        np.testing.assert_allclose(walsh_hadamard(q), expected, atol=1e-15)


class TestIteration:
    def test_prepare_initial_yy(self):
        np.testing.assert_allclose(prepare_initial(U_YY, 0), [0.5, -0.5, -0.5, 0.5], atol=1e-15)

    def test_prepare_initial_identity(self):
        np.testing.assert_array_equal(prepare_initial(np.eye(4), 2), [0, 0, 1, 0])

    def test_prepare_initial_xy(self):
        np.testing.assert_allclose(prepare_initial(U_XY, 0), [0.5, -0.5, 0.5j, -0.5j], atol=1e-15)

    def test_psi1_after_one_iteration(self):
        state = run_iterations(U_YY, 0, [0, 3], -HALF_PI, -HALF_PI, 1)
        expected = np.exp(1j * math.pi / 4) * np.array([R2, 0, 0, R2])
        np.testing.assert_allclose(state, expected, atol=1e-14)

    def test_zero_iterations(self):
        np.testing.assert_allclose(run_iterations(U_XY, 0, [0, 3], 1.0, 2.0, 0), prepare_initial(U_XY, 0))

    def test_negative_iterations(self):
        with pytest.raises(ValidationError):
            run_iterations(U_YY, 0, [0], 1.0, 1.0, -1)

    def test_dimension_mismatch(self):
        with pytest.raises(ValidationError):
            run_iterations(U_YY, 0, [5], 1.0, 1.0, 1)

    def test_original_grover_four_states(self):
        # brute force: explicit W-H entries, explicit reflections
        n = 4
        H = np.array([[hadamard_entry(i, j, 2) for j in range(n)] for i in range(n)])
        state = H[:, 0].astype(complex)
        state[2] *= -1
        mean_reflect = 2 * np.outer(H[:, 0], H[:, 0]) - np.eye(n)
        oracle_state = mean_reflect @ state
        assert abs(oracle_state[2]) ** 2 == pytest.approx(1, abs=1e-12)
        out = run_iterations(walsh_hadamard(2), 0, [2], math.pi, math.pi, 1)
        assert abs(out[2]) ** 2 == pytest.approx(1, abs=1e-12)
        assert fidelity(out, oracle_state) == pytest.approx(1, abs=1e-12)

    @pytest.mark.parametrize("q", [2, 3, 4])
    def test_original_grover_optimal_count(self, q):
        n = 2**q
        iters = round(math.pi / 4 * math.sqrt(n) - 0.5)
        for target in range(n):
            state = run_iterations(walsh_hadamard(q), 0, [target], math.pi, math.pi, iters)
            assert success_probability(state, [target]) > 1 - 1 / n

    @settings(max_examples=30, deadline=None)
    @given(
        seed=st.integers(0, 2**32 - 1),
        dim=st.sampled_from([4, 8, 16]),
        beta=angles,
        gamma=angles,
        n=st.integers(0, 100),
    )
    def test_norm_preserved(self, seed, dim, beta, gamma, n):
        rng = np.random.default_rng(seed)
        U = random_rotation_unitary(dim, rng, sweeps=1)
        marked = rng.choice(dim, size=int(rng.integers(0, dim + 1)), replace=False)
        state = run_iterations(U, 0, marked, beta, gamma, n)
        assert abs(np.linalg.norm(state) - 1) < 1e-12


class TestProbability:
    def test_full_support(self):
        assert success_probability(EPR["psi1"], [0, 3]) == pytest.approx(1.0, abs=1e-15)

    def test_initial_state(self):
        assert success_probability(prepare_initial(U_YY, 0), [0, 3]) == pytest.approx(0.5, abs=1e-15)

    def test_empty(self):
        assert success_probability(EPR["psi1"], []) == 0.0

    @given(theta=st.floats(0, 2 * math.pi))
    def test_fidelity_ignores_global_phase(self, theta):
        state = run_iterations(U_YY, 0, [0, 3], -HALF_PI, -HALF_PI, 1)
        assert fidelity(EPR["psi1"], np.exp(1j * theta) * state) == pytest.approx(
            fidelity(EPR["psi1"], state), abs=1e-12
        )
