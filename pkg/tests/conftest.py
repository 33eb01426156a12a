import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=60, deadline=None, derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]])
SZ = np.diag([1.0, -1.0]).astype(complex)
I2 = np.eye(2, dtype=complex)


def kron_hamiltonian(delta, eta, theta=0.0):
    """Dimer Hamiltonian assembled from Pauli Kronecker products (units of D)."""
    n = (np.sin(theta), 0.0, np.cos(theta))
    paulis = (SX, SY, SZ)
    dot = sum(np.kron(s, s) for s in paulis)
    n1 = sum(c * np.kron(s, I2) for c, s in zip(n, paulis))
    n2 = sum(c * np.kron(I2, s) for c, s in zip(n, paulis))
    zeeman = np.kron(SZ, I2) + np.kron(I2, SZ)
    return 0.5 * (dot + (delta - 1.0) * n1 @ n2) - 0.5 * eta * zeeman


def expm_gibbs(delta, eta, x, theta=0.0):
    from scipy.linalg import expm
    r = expm(-x * kron_hamiltonian(delta, eta, theta))
    return r / np.trace(r)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
