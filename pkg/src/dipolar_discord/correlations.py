"""Entropies, mutual information, discord, classical correlation and entanglement.

All information quantities are in bits. Inputs are :class:`~dipolar_discord.model.XState`
instances; the zero-field helpers take the correlators directly.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional

from . import kernels
from .errors import DomainError, UndefinedAtFieldError
from .kernels import NEG_TOL
from .model import XState, correlators_of

LN2 = math.log(2.0)


@dataclass(frozen=True)
class CorrelationSet:
    s_a: float
    s_ab: float
    mutual: float
    q1: float
    q2: float
    discord: float
    classical: float
    concurrence: float
    entanglement: float
    geometric: Optional[float] = None

    def as_dict(self) -> dict:
        return asdict(self)


def _h(p: float) -> float:
    return float(-kernels.xlog2x_np(p))


def entropy_sub(s: XState) -> float:
    """Entropy of either one-spin marginal, diag(a + b, b + d)."""
    return _h(s.a + s.b) + _h(s.b + s.d)


def entropy_joint(s: XState) -> float:
    return _h(s.a) + _h(s.d) + _h(s.b + s.v) + _h(s.b - s.v)


def mutual_information(s: XState) -> float:
    return 2.0 * entropy_sub(s) - entropy_joint(s)


def discord_branches(s: XState) -> tuple[float, float]:
    """Discord for a sigma_z (first) and a sigma_x (second) measurement on one spin."""
    a, b, d, v = s.a, s.b, s.d, s.v
    base = entropy_sub(s) - entropy_joint(s)
    ratio = kernels.xlog2ratio_np
    q1 = base - float(ratio(a, a + b) + ratio(b, a + b) + ratio(b, b + d) + ratio(d, b + d))
    r = math.sqrt((a - d) ** 2 + 4.0 * v * v)
    q2 = base + float(kernels.binary_entropy_np(0.5 * (1.0 + r)))
    return q1, q2


def discord(s: XState) -> float:
    return min(discord_branches(s))


def classical_correlation(s: XState) -> float:
    return mutual_information(s) - discord(s)


def _clamped_log_term(arg: float) -> float:
    # arg * log2(arg) with the shared rounding-dust clamp
    if arg < -NEG_TOL:
        raise DomainError(f"logarithm argument {arg!r} is negative")
    return float(kernels.xlog2x_np(max(arg, 0.0)))


def zero_field_classical(g_par: float) -> float:
    return 0.5 * (_clamped_log_term(1.0 + g_par) + _clamped_log_term(1.0 - g_par))


def zero_field_discord(g_par: float, g_perp: float) -> float:
    """Zero-field discord from the two correlators; valid while g_par >= |g_perp|."""
    return 0.25 * (
        _clamped_log_term(1.0 + 2.0 * g_perp - g_par)
        - 2.0 * _clamped_log_term(1.0 - g_par)
        + _clamped_log_term(1.0 - 2.0 * g_perp - g_par)
    )


def _log_cosh(x: float) -> float:
    if x < 1.0:
        return math.log1p(2.0 * math.sinh(0.5 * x) ** 2)
    return x + math.log1p(math.exp(-2.0 * x)) - LN2


def discord_thermal_zero_field(delta: float, x: float) -> float:
    """Zero-field thermal discord as an explicit function of x = D / k_B T.

    Evaluated without overflow for any x >= 0, and without cancellation for
    x -> 0 where the result behaves as x**2 / (4 ln 2).
    """
    if math.isnan(x) or x < 0:
        raise ValueError(f"inverse temperature must be >= 0, got {x}")
    if math.isinf(x):
        return 0.0
    lc = _log_cosh(x)
    if x < 1.0:
        num = x * math.sinh(x) - math.cosh(x) * lc
        den = math.cosh(x) + math.exp(-delta * x)
        return num / (den * LN2)
    # numerator and denominator scaled by 2 exp(-x)
    e2 = math.exp(-2.0 * x)
    num = x * (1.0 - e2) - (1.0 + e2) * lc
    k = (delta + 1.0) * x
    if k < 0.0:
        # exp(-k) dominates the denominator: divide it out
        return num * math.exp(k) / (((1.0 + e2) * math.exp(k) + 2.0) * LN2)
    return num / (((1.0 + e2) + 2.0 * math.exp(-k)) * LN2)


def concurrence(s: XState) -> float:
    rad = s.a * s.d
    if rad < -NEG_TOL:
        raise DomainError(f"negative product a*d = {rad!r}")
    return min(2.0 * max(abs(s.v) - math.sqrt(max(rad, 0.0)), 0.0), 1.0)


def entanglement(conc: float) -> float:
    """Entanglement of formation (bits) for a given concurrence."""
    if not -NEG_TOL <= conc <= 1.0 + NEG_TOL:
        raise DomainError(f"concurrence {conc!r} outside [0, 1]")
    conc = min(max(conc, 0.0), 1.0)
    return float(kernels.binary_entropy_np(0.5 * (1.0 + math.sqrt(1.0 - conc * conc))))


def geometric_discord_zero_field(g_perp: float, eta: float = 0.0) -> float:
    if eta != 0.0:
        raise UndefinedAtFieldError("geometric discord is only available at zero field")
    return g_perp * g_perp


def correlation_set(s: XState, eta: float = 0.0) -> CorrelationSet:
    """Every correlation measure of one state; ``eta`` only gates the geometric discord."""
    s_a, s_ab = entropy_sub(s), entropy_joint(s)
    q1, q2 = discord_branches(s)
    q = min(q1, q2)
    mutual = 2.0 * s_a - s_ab
    conc = concurrence(s)
    geo = geometric_discord_zero_field(correlators_of(s).g_perp) if eta == 0.0 else None
    return CorrelationSet(
        s_a=s_a, s_ab=s_ab, mutual=mutual, q1=q1, q2=q2, discord=q,
        classical=mutual - q, concurrence=conc, entanglement=entanglement(conc),
        geometric=geo,
    )
