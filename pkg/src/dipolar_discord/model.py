"""Dipolar spin-1/2 dimer: Hamiltonian, spectrum, thermal X state and correlators.

Everything here is in reduced units: energies in units of the dipolar constant
D, field ``eta = h / D`` and inverse temperature ``x = D / (k_B T)``. The
basis order is |00>, |01>, |10>, |11> with sigma_z |0> = +|0>.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import InvalidStateError

STATE_TOL = 1e-12


@dataclass(frozen=True)
class DimerParams:
    delta: float = -2.0
    eta: float = 0.0
    theta: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.delta):
            raise ValueError(f"anisotropy must be finite, got {self.delta}")
        if not math.isfinite(self.eta):
            raise ValueError(f"field must be finite, got {self.eta}")
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"polar angle must lie in [0, pi], got {self.theta}")


@dataclass(frozen=True)
class ThermalPoint:
    """Reduced inverse temperature ``x = D / k_B T``; ``x = inf`` is T = 0."""

    x: float

    def __post_init__(self):
        if math.isnan(self.x) or self.x < 0:
            raise ValueError(f"inverse temperature must be >= 0, got {self.x}")

    @classmethod
    def from_t(cls, t: float) -> "ThermalPoint":
        """From reduced temperature ``k_B T / D``; ``t = 0`` gives the ground state."""
        if math.isnan(t) or t < 0:
            raise ValueError(f"temperature must be >= 0, got {t}")
        return cls(math.inf if t == 0 else 1.0 / t)

    @property
    def t(self) -> float:
        return 0.0 if math.isinf(self.x) else (math.inf if self.x == 0 else 1.0 / self.x)

    @property
    def is_ground(self) -> bool:
        return math.isinf(self.x)


@dataclass(frozen=True)
class XState:
    """Elements of the X-shaped density matrix diag(a, [[b, v], [v, b]], d)."""

    a: float
    b: float
    d: float
    v: float

    def validate(self, tol: float = STATE_TOL) -> "XState":
        a, b, d, v = self.a, self.b, self.d, self.v
        if abs(a + d + 2 * b - 1.0) > tol:
            raise InvalidStateError(f"trace a + d + 2b = {a + d + 2 * b!r} != 1")
        for name, val in (("a", a), ("d", d), ("b+v", b + v), ("b-v", b - v)):
            if val < -tol:
                raise InvalidStateError(f"negative eigenvalue {name} = {val!r}")
        return self

    def eigenvalues(self) -> np.ndarray:
        return np.array([self.a, self.d, self.b + self.v, self.b - self.v])

    def to_matrix(self) -> np.ndarray:
        rho = np.zeros((4, 4), dtype=complex)
        rho[0, 0], rho[3, 3] = self.a, self.d
        rho[1, 1] = rho[2, 2] = self.b
        rho[1, 2] = rho[2, 1] = self.v
        return rho


@dataclass(frozen=True)
class Correlators:
    m: float
    g_par: float
    g_perp: float


@dataclass(frozen=True)
class Spectrum:
    e1: float
    e2: float
    e3: float
    e4: float

    @property
    def ground(self) -> float:
        return min(self.e1, self.e2, self.e3, self.e4)

    def levels(self) -> np.ndarray:
        return np.array([self.e1, self.e2, self.e3, self.e4])


def _x_of(t) -> float:
    return float(t.x if isinstance(t, ThermalPoint) else t)


def _require_longitudinal(params: DimerParams):
    if params.theta != 0.0:
        raise ValueError("closed-form thermal state needs theta = 0; use oracle.gibbs_general")


def hamiltonian_matrix(params: DimerParams) -> np.ndarray:
    """4x4 Hamiltonian in units of D.

    The coupling is ``(1/2)[s1.s2 + (delta - 1)(n.s1)(n.s2)] - (eta/2)(s1z + s2z)``
    with ``n = (sin theta, 0, cos theta)``. For delta = -2 this is the bare
    dipole-dipole form; for theta = 0 it reduces to the XXZ dimer.
    """
    k = params.delta - 1.0
    s, c = math.sin(params.theta), math.cos(params.theta)
    if params.theta == 0.0:
        s, c = 0.0, 1.0
    eta = params.eta
    diag_out = 0.5 * (1.0 + k * c * c)
    diag_in = -0.5 * (1.0 + k * c * c)
    mix = 0.5 * k * s * c
    return np.array([
        [diag_out - eta, mix, mix, 0.5 * k * s * s],
        [mix, diag_in, 1.0 + 0.5 * k * s * s, -mix],
        [mix, 1.0 + 0.5 * k * s * s, diag_in, -mix],
        [0.5 * k * s * s, -mix, -mix, diag_out + eta],
    ])


def spectrum(params: DimerParams) -> Spectrum:
    """Levels ordered as (upper middle, lower middle, |11>, |00>).

    For delta = -2 these are (2, 0, -1 + eta, -1 - eta).
    """
    _require_longitudinal(params)
    centre = -0.5 * params.delta
    return Spectrum(
        e1=centre + 1.0,
        e2=centre - 1.0,
        e3=0.5 * params.delta + params.eta,
        e4=0.5 * params.delta - params.eta,
    )


def partition_function(params: DimerParams, t, log: bool = False) -> float:
    """Z = sum_i exp(-x E_i), summed with exponents shifted by the ground level.

    With ``log=True`` returns ln Z, which stays finite wherever Z itself would
    overflow (e.g. x = 700, eta = 10).
    """
    _require_longitudinal(params)
    x = _x_of(t)
    if math.isinf(x):
        raise ValueError("partition function diverges at T = 0; use gibbs_xstate")
    levels = spectrum(params).levels()
    e0 = levels.min()
    log_z = -x * e0 + math.log(np.exp(-x * (levels - e0)).sum())
    return log_z if log else math.exp(log_z)


def gibbs_xstate(params: DimerParams, t) -> XState:
    """Thermal state exp(-x H) / Z, exponents shifted by the ground energy.

    At x = inf the ground manifold is populated uniformly, which for
    delta = -2 gives a = d = 1/2 at zero field and a fully polarized product
    state otherwise.
    """
    _require_longitudinal(params)
    a, b, d, v = kernels.populations_np(params.delta, params.eta, _x_of(t))
    return XState(float(a), float(b), float(d), float(v))


def correlators(params: DimerParams, t) -> Correlators:
    s = gibbs_xstate(params, t)
    return correlators_of(s)


def correlators_of(s: XState) -> Correlators:
    return Correlators(m=s.a - s.d, g_par=1.0 - 4.0 * s.b, g_perp=2.0 * s.v)


def xstate_from_correlators(c: Correlators) -> XState:
    s = XState(
        a=0.25 * (1.0 + 2.0 * c.m + c.g_par),
        b=0.25 * (1.0 - c.g_par),
        d=0.25 * (1.0 - 2.0 * c.m + c.g_par),
        v=0.5 * c.g_perp,
    )
    return s.validate()
