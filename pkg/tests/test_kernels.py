import os
import subprocess
import sys

import numpy as np
import pytest

from dipolar_discord import DimerParams, DomainError, correlation_set, correlators, gibbs_xstate, kernels
from dipolar_discord.oracle import _b_side_operators

from .test_oracle import random_density

XS = np.concatenate([np.geomspace(1e-3, 80.0, 37), [np.inf]])
ETAS = np.linspace(-4.0, 4.0, 17)


class TestScanGrid:
    @pytest.mark.parametrize("delta", [-2.0, -3.0, -1.5, 0.5])
    def test_numba_matches_numpy(self, delta):
        nb = kernels.scan_grid(delta, XS, ETAS, backend="numba")
        ref = kernels.scan_grid(delta, XS, ETAS, backend="numpy")
        assert nb.shape == (XS.size, ETAS.size, len(kernels.COLUMNS))
        np.testing.assert_allclose(nb, ref, rtol=1e-12, atol=1e-14)

    def test_matches_scalar_api(self):
        table = kernels.scan_grid(-2.0, XS[::6], ETAS[::4])
        col = {c: k for k, c in enumerate(kernels.COLUMNS)}
        for i, x in enumerate(XS[::6]):
            for j, eta in enumerate(ETAS[::4]):
                p = DimerParams(-2.0, eta)
                cs = correlation_set(gibbs_xstate(p, x), eta)
                c = correlators(p, x)
                row = table[i, j]
                expected = {"m": c.m, "g_par": c.g_par, "g_perp": c.g_perp, "I": cs.mutual,
                            "C": cs.classical, "Q": cs.discord, "Q1": cs.q1, "Q2": cs.q2,
                            "E": cs.entanglement, "concurrence": cs.concurrence,
                            "s_a": cs.s_a, "s_ab": cs.s_ab}
                for name, value in expected.items():
                    assert row[col[name]] == pytest.approx(value, abs=1e-13), name

    def test_no_negative_zero(self):
        table = kernels.scan_grid(-2.0, XS, ETAS)
        assert not np.any(np.signbit(table[..., kernels.COLUMNS.index("E")]))

    def test_populations_agree(self):
        for x in XS:
            for eta in ETAS:
                nb = kernels.populations_nb(-2.0, eta, x)
                ref = [float(t) for t in kernels.populations_np(-2.0, eta, x)]
                np.testing.assert_allclose(nb, ref, rtol=1e-13, atol=1e-16)


class TestConditionalEntropyGrid:
    def test_numba_matches_numpy(self, rng):
        rho = random_density(rng)
        rho_a, t_ops = _b_side_operators(rho)
        pol = np.linspace(0, np.pi, 23)
        azi = np.linspace(0, 2 * np.pi, 19)
        nb = kernels.conditional_entropy_grid(rho_a, t_ops, pol, azi, backend="numba")
        ref = kernels.conditional_entropy_grid(rho_a, t_ops, pol, azi, backend="numpy")
        np.testing.assert_allclose(nb, ref, rtol=1e-12, atol=1e-14)

    def test_rank_deficient_state(self):
        rho = np.zeros((4, 4), dtype=complex)
        rho[0, 0] = 1.0
        rho_a, t_ops = _b_side_operators(rho)
        for backend in ("numba", "numpy"):
            out = kernels.conditional_entropy_grid(rho_a, t_ops, [0.0, 1.0], [0.0], backend=backend)
            np.testing.assert_allclose(out, 0.0, atol=1e-12)


class TestPrimitives:
    def test_domain_errors(self):
        with pytest.raises(DomainError):
            kernels.xlog2x_np(-1e-6)
        with pytest.raises(DomainError):
            kernels.xlog2ratio_np(-1e-6, 0.5)

    def test_rounding_dust_is_zero(self):
        assert kernels.xlog2x_np(-1e-15) == 0.0

    @pytest.mark.parametrize("backend", ["numba", "numpy"])
    @pytest.mark.parametrize("x", [-1.0, np.nan])
    def test_scan_rejects_bad_temperature(self, backend, x):
        with pytest.raises(DomainError):
            kernels.scan_grid(-2.0, np.array([x]), np.array([0.0]), backend=backend)

    def test_negative_population_in_both_routes(self):
        with pytest.raises(ValueError):
            kernels.correlations_nb(-0.1, 0.3, 0.5, 0.0)
        with pytest.raises(DomainError):
            kernels.correlations_np(-0.1, 0.3, 0.5, 0.0)


class TestBackendFlag:
    def test_env_flag_selects_numpy(self):
        env = dict(os.environ, DIPOLAR_DISCORD_DISABLE_NUMBA="1")
        out = subprocess.run([sys.executable, "-c", "import dipolar_discord as d; print(d.BACKEND)"],
                             env=env, capture_output=True, text=True, check=True)
        assert out.stdout.strip() == "numpy"

    def test_default_backend(self):
        if os.environ.get("DIPOLAR_DISCORD_DISABLE_NUMBA", "") in ("", "0"):
            assert kernels.BACKEND == "numba"
