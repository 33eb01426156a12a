"""High- and low-temperature expansions of the correlators and correlations.

The series are not range-checked. They are meant for x <= 0.1 (high
temperature) and x >= 10 (low temperature).
"""
import math

LN2 = math.log(2.0)


def high_t_correlators(delta, eta, x):
    """(m, g_par, g_perp) through orders x**2, x**2 and x**3 respectively."""
    m = 0.5 * eta * x - 0.25 * delta * eta * x ** 2
    g_par = -0.5 * delta * x - 0.25 * (1.0 - eta ** 2) * x ** 2
    g_perp = -0.5 * x - 0.25 * delta * x ** 2 + 0.125 * (1.0 / 3.0 + eta ** 2) * x ** 3
    return m, g_par, g_perp


def high_t_discord_branches(delta, x):
    q1 = x ** 2 / (4.0 * LN2) + delta * x ** 3 / (8.0 * LN2)
    q2 = (1.0 + delta ** 2) * x ** 2 / (8.0 * LN2)
    return q1, q2


def high_t_discord(x):
    """Leading discord for |delta| > 1; independent of field and anisotropy."""
    return x ** 2 / (4.0 * LN2)


def high_t_classical(delta, x):
    return delta ** 2 * x ** 2 / (8.0 * LN2)


def low_t_correlators(eta, x, gap_corrected=False):
    """(g_par, g_perp) near T = 0 for the dipolar dimer (delta = -2).

    By default the field only changes the prefactors (2 and 1 instead of 1 and
    1/2). With ``gap_corrected=True`` the exponent also carries the field,
    exp(-(1 + |eta|) x), which is the actual decay of the exact correlators.
    """
    if eta == 0:
        w = math.exp(-x)
        return 1.0 - w, -0.5 * w
    w = math.exp(-(1.0 + abs(eta)) * x) if gap_corrected else math.exp(-x)
    return 1.0 - 2.0 * w, -w


def low_t_discord(x):
    return 0.5 * math.exp(-x)
