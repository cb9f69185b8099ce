"""Small numeric kernels shared by the closed-form and brute-force paths."""
from __future__ import annotations

import math
from typing import Callable

import numpy as np

LN2 = math.log(2.0)


def xlogx(x):
    """x*ln(x) with the continuous extension 0*ln(0) = 0.

    Accepts scalars or ndarrays; tiny negative inputs (rounding noise)
    are treated as zero.
    """
    if np.isscalar(x):
        return x * math.log(x) if x > 0.0 else 0.0
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0.0
    out[pos] = x[pos] * np.log(x[pos])
    return out


def shannon(probs) -> float:
    """-sum(p ln p) in nats over an array of probabilities."""
    return float(-np.sum(xlogx(np.asarray(probs, dtype=float))))


def lncosh(x: float) -> float:
    """ln(cosh(x)), overflow safe for large |x|."""
    ax = abs(x)
    return ax + math.log1p(math.exp(-2.0 * ax)) - LN2


def log_ratio_over_diff(x: float, y: float) -> float:
    """ln(x/y)/(x - y) for x, y > 0, stable as x -> y."""
    z = (x - y) / (x + y)
    if abs(z) < 1e-5:
        z2 = z * z
        return 2.0 / (x + y) * (1.0 + z2 / 3.0 + z2 * z2 / 5.0)
    return math.log(x / y) / (x - y)


def deriv1_central(f: Callable[[float], float], x: float, h: float) -> float:
    """First derivative, central difference with one Richardson step."""

    def d(step: float) -> float:
        return (f(x + step) - f(x - step)) / (2.0 * step)

    return (4.0 * d(h / 2.0) - d(h)) / 3.0


def deriv1_onesided4(f: Callable[[float], float], x: float, h: float) -> float:
    """Fourth-order one-sided first derivative; sign of h picks the side."""
    f0, f1, f2, f3, f4 = (f(x + k * h) for k in range(5))
    return (-25.0 * f0 + 48.0 * f1 - 36.0 * f2 + 16.0 * f3 - 3.0 * f4) / (12.0 * h)


def deriv2_central(f: Callable[[float], float], x: float, h: float) -> float:
    """Second derivative, 5-point stencil with one Richardson step."""

    def d(step: float) -> float:
        return (
            -f(x - 2 * step)
            + 16.0 * f(x - step)
            - 30.0 * f(x)
            + 16.0 * f(x + step)
            - f(x + 2 * step)
        ) / (12.0 * step * step)

    return (16.0 * d(h / 2.0) - d(h)) / 15.0


def bisect(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    *,
    xtol: float = 1e-10,
    flo: float | None = None,
    fhi: float | None = None,
) -> float:
    """Plain bisection on a bracketing interval [lo, hi].

    Raises ValueError when the endpoints do not bracket a sign change.
    """
    if flo is None:
        flo = f(lo)
    if fhi is None:
        fhi = f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0.0) == (fhi > 0.0):
        raise ValueError("endpoints do not bracket a root")
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm > 0.0) == (flo > 0.0):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
    return 0.5 * (lo + hi)


def find_bracket(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    n: int = 64,
    *,
    min_amplitude: float = 0.0,
) -> list[tuple[float, float, float, float]]:
    """Scan [lo, hi] on n points and return all sign-change intervals
    as (x_left, x_right, f_left, f_right) tuples, ordered by x.

    Sign changes where both endpoint magnitudes fall below `min_amplitude`
    are discarded, and exact zeros carry no sign information: both are
    underflow artifacts deep in the low-T corner, not boundaries.
    """
    xs = np.linspace(lo, hi, n)
    vals = [f(x) for x in xs]
    out = []
    for i in range(n - 1):
        f1, f2 = vals[i], vals[i + 1]
        if not (math.isfinite(f1) and math.isfinite(f2)):
            continue
        if f1 == 0.0 or f2 == 0.0:
            continue
        if max(abs(f1), abs(f2)) < min_amplitude:
            continue
        if (f1 > 0.0) != (f2 > 0.0):
            out.append((xs[i], xs[i + 1], f1, f2))
    return out


def fmt12(x: float) -> str:
    """Format with 12 significant digits (CSV convention)."""
    return format(float(x), ".12g")
