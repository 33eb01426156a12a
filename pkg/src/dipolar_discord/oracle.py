"""Brute-force reference computations on generic two-qubit density matrices.

Nothing here uses the X-state closed forms: classical correlation is maximized
numerically over rank-1 projective measurements on spin B, and concurrence uses
the general spin-flip construction. These routines exist to check the closed
forms, not to replace them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .model import DimerParams, ThermalPoint, hamiltonian_matrix

SIGMA = np.array([
    [[0, 1], [1, 0]],
    [[0, -1j], [1j, 0]],
    [[1, 0], [0, -1]],
], dtype=complex)
IDENTITY2 = np.eye(2, dtype=complex)

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
EIG_TOL = 1e-10
OUTCOME_TOL = 1e-14


@dataclass(frozen=True)
class MeasurementDirection:
    """Bloch direction of the projector pair measured on spin B."""

    polar: float
    azimuth: float

    @classmethod
    def normalized(cls, polar: float, azimuth: float) -> "MeasurementDirection":
        """Fold arbitrary angles into polar in [0, pi], azimuth in [0, 2 pi)."""
        polar = math.remainder(polar, 2 * math.pi)
        if polar < 0:
            polar, azimuth = -polar, azimuth + math.pi
        return cls(polar, azimuth % (2 * math.pi))

    def vector(self) -> np.ndarray:
        st = math.sin(self.polar)
        return np.array([st * math.cos(self.azimuth), st * math.sin(self.azimuth),
                         math.cos(self.polar)])

    def projectors(self) -> tuple[np.ndarray, np.ndarray]:
        n_sigma = np.einsum("k,kij->ij", self.vector(), SIGMA)
        return 0.5 * (IDENTITY2 + n_sigma), 0.5 * (IDENTITY2 - n_sigma)


def check_density_matrix(rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {rho.shape}")
    if np.abs(rho - rho.conj().T).max() > HERMITIAN_TOL:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > TRACE_TOL:
        raise ValueError(f"density matrix has trace {np.trace(rho).real!r}")
    if np.linalg.eigvalsh(rho).min() < -EIG_TOL:
        raise ValueError("density matrix is not positive semidefinite")
    return rho


def von_neumann_entropy(rho) -> float:
    evals = np.linalg.eigvalsh(np.asarray(rho, dtype=complex))
    return float(-kernels.xlog2x_np(np.clip(evals, 0.0, None)).sum())


def gibbs_general(params: DimerParams, t) -> np.ndarray:
    """exp(-x H) / Tr exp(-x H) by spectral decomposition, any polar angle."""
    x = float(t.x if isinstance(t, ThermalPoint) else t)
    if not math.isfinite(x) or x < 0:
        raise ValueError(f"gibbs_general needs a finite x >= 0, got {x}")
    evals, vecs = np.linalg.eigh(hamiltonian_matrix(params))
    w = np.exp(-x * (evals - evals.min()))
    w /= w.sum()
    rho = (vecs * w) @ vecs.conj().T
    return 0.5 * (rho + rho.conj().T).astype(complex)


def partial_trace(rho, keep: str = "A") -> np.ndarray:
    r = np.asarray(rho, dtype=complex).reshape(2, 2, 2, 2)
    if keep == "A":
        return np.einsum("ibjb->ij", r)
    if keep == "B":
        return np.einsum("aiaj->ij", r)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def conditioned_state(rho, direction: MeasurementDirection):
    """Outcome probabilities and post-measurement states of A for a measurement on B.

    Returns ``(p0, rho_a0, p1, rho_a1)``; a conditional state is ``None`` when
    its outcome probability is below 1e-14.
    """
    rho = np.asarray(rho, dtype=complex)
    out = []
    for proj in direction.projectors():
        big = np.kron(IDENTITY2, proj)
        post = big @ rho @ big
        p = float(np.trace(post).real)
        out.append(p)
        out.append(partial_trace(post, "A") / p if p >= OUTCOME_TOL else None)
    return tuple(out)


def _b_side_operators(rho) -> tuple[np.ndarray, np.ndarray]:
    # rho_A and T_k = Tr_B[(1 x sigma_k) rho]
    r = np.asarray(rho, dtype=complex).reshape(2, 2, 2, 2)
    t_ops = np.einsum("kcb,abjc->kaj", SIGMA, r)
    return np.einsum("ibjb->ij", r), t_ops


def measured_conditional_entropy(rho, polar: float, azimuth: float) -> float:
    """sum_i p_i S(rho_A^i) for the projector pair along (polar, azimuth)."""
    rho_a, t_ops = _b_side_operators(rho)
    return float(kernels.conditional_entropy_grid(rho_a, t_ops, [polar], [azimuth])[0, 0])


def _minimize_conditional_entropy(rho, grid_n: int, refine_iters: int, candidates: int = 3):
    rho_a, t_ops = _b_side_operators(rho)
    polars = np.linspace(0.0, math.pi, grid_n)
    azimuths = np.linspace(0.0, 2 * math.pi, grid_n, endpoint=False)
    grid = kernels.conditional_entropy_grid(rho_a, t_ops, polars, azimuths)

    best_val, best_dir = math.inf, (0.0, 0.0)
    offsets = np.arange(-2, 3, dtype=float)
    for flat in np.argsort(grid, axis=None)[:candidates]:
        i, j = np.unravel_index(flat, grid.shape)
        p0, a0 = polars[i], azimuths[j]
        hp, ha = math.pi / (grid_n - 1), 2 * math.pi / grid_n
        val = grid[i, j]
        # shrinking 5x5 stencil; angles are unconstrained since any pair maps to a unit vector
        for _ in range(refine_iters):
            local = kernels.conditional_entropy_grid(rho_a, t_ops, p0 + hp * offsets, a0 + ha * offsets)
            k, l = np.unravel_index(np.argmin(local), local.shape)
            if local[k, l] < val:
                val, p0, a0 = local[k, l], p0 + hp * offsets[k], a0 + ha * offsets[l]
            hp *= 0.5
            ha *= 0.5
        if val < best_val:
            best_val, best_dir = val, (p0, a0)
    return best_val, MeasurementDirection.normalized(*best_dir)


def optimal_measurement(rho, grid_n: int = 64, refine_iters: int = 40):
    """Direction on B that maximizes the information gained about A, and the gain."""
    rho = check_density_matrix(rho)
    cond, direction = _minimize_conditional_entropy(rho, grid_n, refine_iters)
    return von_neumann_entropy(partial_trace(rho, "A")) - cond, direction


def classical_correlation_numeric(rho, grid_n: int = 64, refine_iters: int = 40) -> float:
    if grid_n < 16:
        raise ValueError("grid_n must be at least 16")
    return optimal_measurement(rho, grid_n, refine_iters)[0]


def mutual_information_numeric(rho) -> float:
    rho = check_density_matrix(rho)
    return (von_neumann_entropy(partial_trace(rho, "A"))
            + von_neumann_entropy(partial_trace(rho, "B"))
            - von_neumann_entropy(rho))


def discord_numeric(rho, grid_n: int = 64, refine_iters: int = 40) -> float:
    return mutual_information_numeric(rho) - classical_correlation_numeric(rho, grid_n, refine_iters)


def concurrence_general(rho) -> float:
    """Hill-Wootters concurrence via the spin-flipped state.

    The square-rooted eigenvalues of rho * rho_tilde are taken as singular
    values of sqrt(rho) sqrt(rho_tilde), which keeps them accurate near zero.
    """
    rho = check_density_matrix(rho)
    yy = np.kron(SIGMA[1], SIGMA[1])
    rho_tilde = yy @ rho.conj() @ yy
    lam = np.linalg.svd(_psd_sqrt(rho) @ _psd_sqrt(rho_tilde), compute_uv=False)
    lam = np.sort(lam)[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def _psd_sqrt(m) -> np.ndarray:
    evals, vecs = np.linalg.eigh(m)
    return (vecs * np.sqrt(np.clip(evals, 0.0, None))) @ vecs.conj().T
