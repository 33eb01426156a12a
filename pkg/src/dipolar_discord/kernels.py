"""Hot numeric kernels.

Every kernel exists twice: a numba ``@njit`` loop version (suffix ``_nb``) and a
vectorized pure-numpy version (suffix ``_np``). The public names ``scan_grid``
and ``conditional_entropy_grid`` dispatch to one of them according to
``BACKEND``.

Set ``DIPOLAR_DISCORD_DISABLE_NUMBA=1`` in the environment (before import) to
force the numpy path. The numpy path is also used when numba is not importable.
"""
import math
import os

import numpy as np

from .errors import DomainError

# Negative probabilities down to -NEG_TOL are rounding dust and are clamped to 0.
NEG_TOL = 1e-12

COLUMNS = (
    "m", "g_par", "g_perp", "I", "C", "Q", "Q1", "Q2", "E", "concurrence", "s_a", "s_ab",
)

_FLAG = os.environ.get("DIPOLAR_DISCORD_DISABLE_NUMBA", "").strip().lower()
_DISABLED = _FLAG not in ("", "0", "false", "no")

try:
    from numba import njit
    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f

BACKEND = "numba" if (HAS_NUMBA and not _DISABLED) else "numpy"

_jit = njit(cache=True, nogil=True)


# ---------------------------------------------------------------------------
# scalar primitives (numba)
# ---------------------------------------------------------------------------

@_jit
def _boltzmann_nb(x, gap):
    # exact 1 on the ground manifold, also at x = inf
    if gap == 0.0:
        return 1.0
    return math.exp(-x * gap)


@_jit
def populations_nb(delta, eta, x):
    """(a, b, d, v) of the thermal X state; x may be +inf."""
    e_a = 0.5 * delta - eta
    e_d = 0.5 * delta + eta
    e_t = 1.0 - 0.5 * delta
    e_s = -1.0 - 0.5 * delta
    e0 = min(min(e_a, e_d), min(e_t, e_s))
    w_a = _boltzmann_nb(x, e_a - e0)
    w_d = _boltzmann_nb(x, e_d - e0)
    w_t = _boltzmann_nb(x, e_t - e0)
    w_s = _boltzmann_nb(x, e_s - e0)
    z = w_a + w_d + w_t + w_s
    return w_a / z, 0.5 * (w_t + w_s) / z, w_d / z, 0.5 * (w_t - w_s) / z


@_jit
def _xlog2x_nb(p):
    if p < -NEG_TOL:
        raise ValueError("negative probability in entropy")
    if p <= 0.0:
        return 0.0
    return p * math.log2(p)


@_jit
def _xlog2ratio_nb(p, q):
    # p * log2(p / q), zero when p vanishes
    if p < -NEG_TOL:
        raise ValueError("negative probability in entropy")
    if p <= 0.0:
        return 0.0
    return p * math.log2(p / q)


@_jit
def _binary_entropy_nb(p):
    return 0.0 - _xlog2x_nb(p) - _xlog2x_nb(1.0 - p)


@_jit
def correlations_nb(a, b, d, v):
    """All closed-form correlation quantities of one X state."""
    s_a = -_xlog2x_nb(a + b) - _xlog2x_nb(b + d)
    s_ab = -_xlog2x_nb(a) - _xlog2x_nb(d) - _xlog2x_nb(b + v) - _xlog2x_nb(b - v)
    cond_z = -(_xlog2ratio_nb(a, a + b) + _xlog2ratio_nb(b, a + b)
               + _xlog2ratio_nb(b, b + d) + _xlog2ratio_nb(d, b + d))
    q1 = s_a - s_ab + cond_z
    r2 = (a - d) ** 2 + 4.0 * v * v
    r = math.sqrt(r2)
    cond_x = _binary_entropy_nb(0.5 * (1.0 + r))
    q2 = s_a - s_ab + cond_x
    mutual = 2.0 * s_a - s_ab
    q = min(q1, q2)
    classical = mutual - q
    rad = a * d
    if rad < -NEG_TOL:
        raise ValueError("negative argument under square root")
    conc = 2.0 * max(abs(v) - math.sqrt(max(rad, 0.0)), 0.0)
    if conc > 1.0:
        conc = 1.0
    ent = _binary_entropy_nb(0.5 * (1.0 + math.sqrt(1.0 - conc * conc)))
    return (a - d, 1.0 - 4.0 * b, 2.0 * v, mutual, classical, q, q1, q2, ent, conc, s_a, s_ab)


@_jit
def scan_grid_nb(delta, xs, etas):
    out = np.empty((xs.shape[0], etas.shape[0], 12))
    for i in range(xs.shape[0]):
        for j in range(etas.shape[0]):
            a, b, d, v = populations_nb(delta, etas[j], xs[i])
            row = correlations_nb(a, b, d, v)
            for k in range(12):
                out[i, j, k] = row[k]
    return out


@_jit
def _weighted_entropy_2x2_nb(m00, m11, m01):
    # p * S(M / p) for an unnormalized Hermitian 2x2 block M
    p = m00 + m11
    if p < 1e-14:
        return 0.0
    half = 0.5 * (m00 - m11)
    rad = math.sqrt(half * half + m01.real * m01.real + m01.imag * m01.imag)
    mu1 = 0.5 * p + rad
    mu2 = 0.5 * p - rad
    return -(_xlog2ratio_nb(mu1, p) + _xlog2ratio_nb(mu2, p))


@_jit
def conditional_entropy_grid_nb(rho_a, t_ops, polars, azimuths):
    out = np.empty((polars.shape[0], azimuths.shape[0]))
    for i in range(polars.shape[0]):
        st = math.sin(polars[i])
        ct = math.cos(polars[i])
        for j in range(azimuths.shape[0]):
            nx = st * math.cos(azimuths[j])
            ny = st * math.sin(azimuths[j])
            # n.T entry by entry, no temporaries in the inner loop
            n00 = (nx * t_ops[0, 0, 0] + ny * t_ops[1, 0, 0] + ct * t_ops[2, 0, 0]).real
            n11 = (nx * t_ops[0, 1, 1] + ny * t_ops[1, 1, 1] + ct * t_ops[2, 1, 1]).real
            n01 = nx * t_ops[0, 0, 1] + ny * t_ops[1, 0, 1] + ct * t_ops[2, 0, 1]
            total = 0.0
            for sgn in (1.0, -1.0):
                m00 = 0.5 * (rho_a[0, 0].real + sgn * n00)
                m11 = 0.5 * (rho_a[1, 1].real + sgn * n11)
                m01 = 0.5 * (rho_a[0, 1] + sgn * n01)
                total += _weighted_entropy_2x2_nb(m00, m11, m01)
            out[i, j] = total
    return out


# ---------------------------------------------------------------------------
# vectorized numpy twins
# ---------------------------------------------------------------------------

def xlog2x_np(p):
    p = np.asarray(p, dtype=float)
    if np.any(p < -NEG_TOL):
        raise DomainError(f"negative probability {p.min():.3e} in entropy")
    pos = p > 0.0
    return np.where(pos, p * np.log2(np.where(pos, p, 1.0)), 0.0)


def xlog2ratio_np(p, q):
    p = np.asarray(p, dtype=float)
    if np.any(p < -NEG_TOL):
        raise DomainError(f"negative probability {p.min():.3e} in entropy")
    pos = p > 0.0
    return np.where(pos, p * np.log2(np.where(pos, p, 1.0) / np.where(pos, q, 1.0)), 0.0)


def binary_entropy_np(p):
    p = np.asarray(p, dtype=float)
    return 0.0 - xlog2x_np(p) - xlog2x_np(1.0 - p)


def populations_np(delta, eta, x):
    delta, eta, x = np.broadcast_arrays(*(np.asarray(t, dtype=float) for t in (delta, eta, x)))
    levels = np.stack([0.5 * delta - eta, 0.5 * delta + eta,
                       1.0 - 0.5 * delta + 0 * eta, -1.0 - 0.5 * delta + 0 * eta])
    gaps = levels - levels.min(axis=0)
    with np.errstate(invalid="ignore", over="ignore"):
        w = np.where(gaps == 0.0, 1.0, np.exp(-x * gaps))
    w_a, w_d, w_t, w_s = w
    z = w.sum(axis=0)
    return w_a / z, 0.5 * (w_t + w_s) / z, w_d / z, 0.5 * (w_t - w_s) / z


def correlations_np(a, b, d, v):
    a, b, d, v = np.broadcast_arrays(*(np.asarray(t, dtype=float) for t in (a, b, d, v)))
    s_a = -xlog2x_np(a + b) - xlog2x_np(b + d)
    s_ab = -xlog2x_np(a) - xlog2x_np(d) - xlog2x_np(b + v) - xlog2x_np(b - v)
    cond_z = -(xlog2ratio_np(a, a + b) + xlog2ratio_np(b, a + b)
               + xlog2ratio_np(b, b + d) + xlog2ratio_np(d, b + d))
    q1 = s_a - s_ab + cond_z
    r = np.sqrt((a - d) ** 2 + 4.0 * v * v)
    q2 = s_a - s_ab + binary_entropy_np(0.5 * (1.0 + r))
    mutual = 2.0 * s_a - s_ab
    q = np.minimum(q1, q2)
    rad = a * d
    if np.any(rad < -NEG_TOL):
        raise DomainError("negative argument under square root")
    conc = np.minimum(2.0 * np.maximum(np.abs(v) - np.sqrt(np.maximum(rad, 0.0)), 0.0), 1.0)
    ent = binary_entropy_np(0.5 * (1.0 + np.sqrt(1.0 - conc * conc)))
    return (a - d, 1.0 - 4.0 * b, 2.0 * v, mutual, mutual - q, q, q1, q2, ent, conc, s_a, s_ab)


def scan_grid_np(delta, xs, etas):
    a, b, d, v = populations_np(delta, np.asarray(etas)[None, :], np.asarray(xs)[:, None])
    return np.stack(correlations_np(a, b, d, v), axis=-1)


def _weighted_entropy_2x2_np(m00, m11, m01):
    p = m00 + m11
    live = p >= 1e-14
    ps = np.where(live, p, 1.0)
    rad = np.sqrt((0.5 * (m00 - m11)) ** 2 + np.abs(m01) ** 2)
    mu1 = np.where(live, 0.5 * p + rad, 0.0)
    mu2 = np.where(live, 0.5 * p - rad, 0.0)
    return -(xlog2ratio_np(mu1, ps) + xlog2ratio_np(mu2, ps))


def conditional_entropy_grid_np(rho_a, t_ops, polars, azimuths):
    pol = np.asarray(polars, dtype=float)[:, None]
    azi = np.asarray(azimuths, dtype=float)[None, :]
    n = (np.sin(pol) * np.cos(azi), np.sin(pol) * np.sin(azi), np.cos(pol) + 0 * azi)
    mn = sum(nk[..., None, None] * t_ops[k] for k, nk in enumerate(n))
    total = np.zeros(mn.shape[:2])
    for sgn in (1.0, -1.0):
        blk = 0.5 * (rho_a + sgn * mn)
        total += _weighted_entropy_2x2_np(blk[..., 0, 0].real, blk[..., 1, 1].real, blk[..., 0, 1])
    return total


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

def scan_grid(delta, xs, etas, backend=None):
    """Closed-form correlation table over a (x, eta) grid.

    Returns an array of shape ``(len(xs), len(etas), len(COLUMNS))``.
    """
    xs = np.ascontiguousarray(xs, dtype=float)
    etas = np.ascontiguousarray(etas, dtype=float)
    if np.any(np.isnan(xs)) or np.any(xs < 0):
        raise DomainError("inverse temperatures must be >= 0 (inf allowed)")
    if not np.all(np.isfinite(etas)):
        raise DomainError("fields must be finite")
    if (backend or BACKEND) == "numba":
        try:
            return scan_grid_nb(float(delta), xs, etas)
        except ValueError as exc:
            raise DomainError(str(exc)) from None
    return scan_grid_np(float(delta), xs, etas)


def conditional_entropy_grid(rho_a, t_ops, polars, azimuths, backend=None):
    """Average post-measurement entropy of A for each Bloch direction on B.

    ``rho_a`` is the 2x2 reduced state of A and ``t_ops[k] = Tr_B[(1 x sigma_k) rho]``.
    """
    rho_a = np.ascontiguousarray(rho_a, dtype=complex)
    t_ops = np.ascontiguousarray(t_ops, dtype=complex)
    polars = np.ascontiguousarray(polars, dtype=float)
    azimuths = np.ascontiguousarray(azimuths, dtype=float)
    if (backend or BACKEND) == "numba":
        try:
            return conditional_entropy_grid_nb(rho_a, t_ops, polars, azimuths)
        except ValueError as exc:
            raise DomainError(str(exc)) from None
    return conditional_entropy_grid_np(rho_a, t_ops, polars, azimuths)
