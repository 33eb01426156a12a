"""Temperature of maximal discord, at zero field and in a longitudinal field."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import mpmath
import numpy as np

from . import kernels
from .correlations import discord, discord_thermal_zero_field
from .errors import NoBracketError
from .model import DimerParams, gibbs_xstate

BRACKET_LO, BRACKET_HI, BRACKET_N = 1e-3, 50.0, 512
ROOT_WIDTH = 1e-13
AGREEMENT_TOL = 1e-9
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class ExtremumResult:
    """Location and height of a discord maximum.

    ``residual`` is |stationarity condition| at ``x_m``: the transcendental
    equation at zero field, |dQ/dx| (central difference) in a field.
    ``cross_check_x`` is the independent direct-maximization estimate, if run.
    """

    x_m: float
    t_m: float
    q_m: float
    residual: float
    cross_check_x: Optional[float] = None


def stationarity_residual(delta: float, x: float) -> float:
    """LHS - RHS of the zero-field condition dQ/dx = 0 for the thermal discord."""
    lc = math.log(math.cosh(x))
    lhs = x * (math.exp(delta * x) + math.cosh(x) + delta * math.sinh(x))
    rhs = (math.sinh(x) + delta * math.cosh(x)) * lc
    return lhs - rhs


def golden_section_max(f: Callable, lo, hi, tol, max_iter: int = 500):
    """Maximizer of a unimodal ``f`` on [lo, hi]; works with floats or mpmath numbers."""
    c = hi - INV_PHI * (hi - lo)
    d = lo + INV_PHI * (hi - lo)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if abs(hi - lo) <= tol:
            break
        if fc > fd:
            hi, d, fd = d, c, fc
            c = hi - INV_PHI * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + INV_PHI * (hi - lo)
            fd = f(d)
    return (lo + hi) / 2


def _thermal_discord_mp(delta, x):
    ch = mpmath.cosh(x)
    return (x * mpmath.sinh(x) - ch * mpmath.log(ch)) / ((ch + mpmath.exp(-delta * x)) * mpmath.log(2))


def _direct_zero_field_max(delta: float, lo: float, hi: float) -> float:
    with mpmath.workdps(40):
        d = mpmath.mpf(delta)
        x = golden_section_max(lambda s: _thermal_discord_mp(d, s),
                               mpmath.mpf(lo), mpmath.mpf(hi), mpmath.mpf("1e-14"))
        return float(x)


def solve_zero_field_max(delta: float = -2.0, cross_check: bool = True) -> ExtremumResult:
    """Zero-field discord maximum from its stationarity condition.

    The root is bracketed on a geometric grid over x in (1e-3, 50), bisected to
    width 1e-13 and polished with one secant step. With ``cross_check`` the
    maximum is also located by golden-section search on the discord itself
    (40-digit arithmetic) and a warning is issued if the two differ by more
    than 1e-9; the root is returned either way.
    """
    if not delta < -1.0:
        raise ValueError(f"discord maximum is located for delta < -1, got {delta}")
    xs = np.geomspace(BRACKET_LO, BRACKET_HI, BRACKET_N)
    vals = np.array([stationarity_residual(delta, x) for x in xs])
    flips = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) <= 0)[0]
    if flips.size == 0:
        raise NoBracketError(f"no sign change of the stationarity condition for delta = {delta}")
    i = flips[0]
    lo, hi = xs[i], xs[i + 1]
    f_lo = vals[i]
    while hi - lo > ROOT_WIDTH:
        mid = 0.5 * (lo + hi)
        f_mid = stationarity_residual(delta, mid)
        if f_mid == 0.0:
            lo = hi = mid
            break
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    x_m = float(0.5 * (lo + hi))
    if hi > lo:
        f_hi = stationarity_residual(delta, hi)
        if f_hi != f_lo:
            secant = lo - f_lo * (hi - lo) / (f_hi - f_lo)
            if lo <= secant <= hi and abs(stationarity_residual(delta, secant)) <= abs(
                    stationarity_residual(delta, x_m)):
                x_m = float(secant)

    direct = None
    if cross_check:
        q = np.array([discord_thermal_zero_field(delta, x) for x in xs])
        k = int(np.argmax(q))
        direct = _direct_zero_field_max(delta, xs[max(k - 1, 0)], xs[min(k + 1, xs.size - 1)])
        if abs(direct - x_m) > AGREEMENT_TOL:
            warnings.warn(
                f"root x = {x_m!r} and direct maximum x = {direct!r} differ by "
                f"{abs(direct - x_m):.2e}", RuntimeWarning, stacklevel=2)
    return ExtremumResult(
        x_m=x_m, t_m=1.0 / x_m, q_m=discord_thermal_zero_field(delta, x_m),
        residual=abs(stationarity_residual(delta, x_m)), cross_check_x=direct,
    )


def _field_discord(delta: float, eta: float) -> Callable[[float], float]:
    params = DimerParams(delta=delta, eta=eta)
    return lambda x: discord(gibbs_xstate(params, x))


def _central_slope(f, x, h=1e-5):
    return (f(x + h) - f(x - h)) / (2 * h)


def locate_max_in_field(delta: float = -2.0, eta: float = 0.0) -> ExtremumResult:
    """Maximum of the discord over temperature at fixed field.

    Coarse scan, golden-section search, then bisection on the sign of the
    central-difference slope to push past the sqrt(eps) limit of a pure
    value comparison. Depends on |eta| only.
    """
    eta = abs(eta)
    q_of = _field_discord(delta, eta)
    xs = np.geomspace(1e-2, BRACKET_HI, 400)
    q = kernels.scan_grid(delta, xs, np.array([eta]))[:, 0, kernels.COLUMNS.index("Q")]
    k = int(np.argmax(q))
    lo, hi = xs[max(k - 1, 0)], xs[min(k + 1, xs.size - 1)]
    x0 = golden_section_max(q_of, lo, hi, 1e-7)

    step = 1e-6
    a, b = x0 - step, x0 + step
    while _central_slope(q_of, a) < 0 or _central_slope(q_of, b) > 0:
        step *= 4
        a, b = max(x0 - step, lo), min(x0 + step, hi)
        if step > hi - lo:
            break
    for _ in range(60):
        mid = 0.5 * (a + b)
        if _central_slope(q_of, mid) > 0:
            a = mid
        else:
            b = mid
        if b - a < 1e-13:
            break
    x_m = float(0.5 * (a + b))
    return ExtremumResult(x_m=x_m, t_m=1.0 / x_m, q_m=float(q_of(x_m)),
                          residual=float(abs(_central_slope(q_of, x_m))))
