import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import minimize

from dipolar_discord import DimerParams, XState, concurrence, discord, gibbs_xstate, oracle
from dipolar_discord.oracle import MeasurementDirection

from .conftest import SX, SZ, expm_gibbs


def random_density(rng, rank=4):
    g = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho)


def werner(p):
    psi = np.array([0.0, 1.0, -1.0, 0.0]) / math.sqrt(2)
    return p * np.outer(psi, psi) + (1 - p) * np.eye(4) / 4


def werner_discord(p):
    # closed form for the Werner family
    f = lambda u: u * math.log2(u) if u > 0 else 0.0
    return 0.25 * f(1 - p) - 0.5 * f(1 + p) + 0.25 * f(1 + 3 * p)


@st.composite
def x_states(draw):
    a = draw(st.floats(0.0, 1.0))
    d = draw(st.floats(0.0, 1.0 - a))
    b = 0.5 * (1.0 - a - d)
    v = draw(st.floats(-1.0, 1.0)) * b
    return XState(a, b, d, v)


class TestDensityChecks:
    def test_rejects_bad_matrices(self):
        with pytest.raises(ValueError):
            oracle.check_density_matrix(np.eye(3) / 3)
        with pytest.raises(ValueError):
            oracle.check_density_matrix(np.diag([1.0, 1.0, -1.0, 0.0]))
        with pytest.raises(ValueError):
            oracle.check_density_matrix(np.eye(4))

    def test_entropy_of_maximally_mixed(self):
        assert oracle.von_neumann_entropy(np.eye(4) / 4) == pytest.approx(2.0)


class TestPartialTrace:
    def test_product_state(self, rng):
        ra = random_density(rng)[:2, :2]
        ra /= np.trace(ra)
        rb = np.diag([0.3, 0.7]).astype(complex)
        rho = np.kron(ra, rb)
        np.testing.assert_allclose(oracle.partial_trace(rho, "A"), ra, atol=1e-15)
        np.testing.assert_allclose(oracle.partial_trace(rho, "B"), rb, atol=1e-15)

    def test_bad_keep(self):
        with pytest.raises(ValueError):
            oracle.partial_trace(np.eye(4) / 4, "C")


class TestMeasurement:
    def test_direction_folding(self):
        d = MeasurementDirection.normalized(-0.5, 0.0)
        np.testing.assert_allclose(d.vector(), MeasurementDirection(-0.5, 0.0).vector(), atol=1e-15)
        assert 0 <= d.polar <= math.pi

    def test_projectors_complete(self):
        p0, p1 = MeasurementDirection(0.7, 1.9).projectors()
        np.testing.assert_allclose(p0 + p1, np.eye(2), atol=1e-15)
        np.testing.assert_allclose(p0 @ p0, p0, atol=1e-15)

    def test_conditioned_state_matches_reduced_kernel(self, rng):
        rho = random_density(rng)
        for polar, azimuth in [(0.0, 0.0), (1.1, 2.3), (math.pi / 2, 0.4)]:
            p0, r0, p1, r1 = oracle.conditioned_state(rho, MeasurementDirection(polar, azimuth))
            assert p0 + p1 == pytest.approx(1.0, abs=1e-14)
            literal = p0 * oracle.von_neumann_entropy(r0) + p1 * oracle.von_neumann_entropy(r1)
            assert oracle.measured_conditional_entropy(rho, polar, azimuth) == pytest.approx(literal, abs=1e-12)

    def test_impossible_outcome(self):
        rho = np.kron(np.eye(2) / 2, np.diag([1.0, 0.0]))
        p0, r0, p1, r1 = oracle.conditioned_state(rho, MeasurementDirection(0.0, 0.0))
        assert (p0, p1) == (1.0, 0.0)
        assert r1 is None

    def test_local_unitary_on_a_leaves_gain(self, rng):
        rho = random_density(rng)
        u = np.kron(np.array([[math.cos(0.4), -math.sin(0.4)], [math.sin(0.4), math.cos(0.4)]]), np.eye(2))
        c0 = oracle.classical_correlation_numeric(rho)
        c1 = oracle.classical_correlation_numeric(u @ rho @ u.conj().T)
        assert c0 == pytest.approx(c1, abs=1e-9)


class TestOptimization:
    @pytest.mark.parametrize("p", [0.1, 0.5, 0.9, 1.0])
    def test_werner_discord(self, p):
        assert oracle.discord_numeric(werner(p)) == pytest.approx(werner_discord(p), abs=1e-9)

    def test_product_state_has_no_discord(self, rng):
        a, b = random_density(rng)[:2, :2], random_density(rng)[2:, 2:]
        rho = np.kron(a / np.trace(a), b / np.trace(b))
        assert oracle.discord_numeric(rho) == pytest.approx(0.0, abs=1e-10)

    def test_classically_correlated_state(self):
        rho = 0.5 * (np.diag([1.0, 0, 0, 0]) + np.diag([0, 0, 0, 1.0]))
        assert oracle.discord_numeric(rho) == pytest.approx(0.0, abs=1e-12)
        assert oracle.classical_correlation_numeric(rho) == pytest.approx(1.0, abs=1e-12)

    def test_against_generic_minimizer(self, rng):
        # independent route: multistart Nelder-Mead over the Bloch angles
        rho = random_density(rng)
        f = lambda ang: oracle.measured_conditional_entropy(rho, ang[0], ang[1])
        best = min(minimize(f, x0, method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-14}).fun
                   for x0 in rng.uniform([0, 0], [math.pi, 2 * math.pi], size=(12, 2)))
        s_a = oracle.von_neumann_entropy(oracle.partial_trace(rho, "A"))
        assert oracle.classical_correlation_numeric(rho) == pytest.approx(s_a - best, abs=1e-9)

    def test_dimer_optimum_is_z(self):
        rho = oracle.gibbs_general(DimerParams(), 1.0)
        _, direction = oracle.optimal_measurement(rho)
        assert abs(math.cos(direction.polar)) == pytest.approx(1.0, abs=1e-6)

    def test_grid_guard(self):
        with pytest.raises(ValueError):
            oracle.classical_correlation_numeric(np.eye(4) / 4, grid_n=8)


class TestGeneralGibbs:
    @pytest.mark.parametrize("theta", [0.0, 0.6, math.pi / 2])
    def test_matches_expm(self, theta):
        rho = oracle.gibbs_general(DimerParams(-2.0, 0.3, theta), 1.4)
        np.testing.assert_allclose(rho, expm_gibbs(-2.0, 0.3, 1.4, theta), atol=1e-13)

    def test_transverse_axis_is_valid_state(self):
        rho = oracle.gibbs_general(DimerParams(-2.0, 0.0, math.pi / 2), 2.0)
        oracle.check_density_matrix(rho)
        # dipolar axis along x: xx correlator is the strong one
        assert np.trace(np.kron(SX, SX) @ rho).real > abs(np.trace(np.kron(SZ, SZ) @ rho).real)

    def test_theta_zero_matches_x_state(self):
        rho = oracle.gibbs_general(DimerParams(-2.0, 0.5), 0.8)
        np.testing.assert_allclose(rho, gibbs_xstate(DimerParams(-2.0, 0.5), 0.8).to_matrix(), atol=1e-14)

    def test_rejects_ground_state(self):
        with pytest.raises(ValueError):
            oracle.gibbs_general(DimerParams(), math.inf)


class TestConcurrence:
    def test_bell_state(self):
        psi = np.array([1.0, 0, 0, 1.0]) / math.sqrt(2)
        assert oracle.concurrence_general(np.outer(psi, psi)) == pytest.approx(1.0, abs=1e-7)

    def test_werner_threshold(self):
        assert oracle.concurrence_general(werner(0.2)) == 0.0
        assert oracle.concurrence_general(werner(0.6)) == pytest.approx(0.5 * (3 * 0.6 - 1), abs=1e-7)

    @given(x_states())
    def test_x_state_formula(self, s):
        assert oracle.concurrence_general(s.to_matrix()) == pytest.approx(concurrence(s), abs=1e-7)

    @given(x_states())
    def test_x_state_discord_matches_oracle(self, s):
        rho = s.to_matrix()
        assert oracle.discord_numeric(rho, grid_n=32, refine_iters=30) == pytest.approx(discord(s), abs=1e-7)
