"""Endpoint curvatures, boundary tracing and (T, B) phase-diagram
rasterization.

The regions of constant optimal measurement angle (0 or pi/2) are separated
from the variable-angle region by curves where the profile's second
derivative at the corresponding endpoint vanishes; a first-order-like
`zero-prime` curve appears where the endpoint value is degenerate with a
coexisting interior minimum, and the classic sudden-change curve is the
locus where the two endpoint branches swap.  All four are traced here by
bracketing and bisection in T at fixed B.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ._numerics import bisect, find_bracket, log_ratio_over_diff
from .correlations import (
    BranchTag,
    CorrelationKind,
    deficit_at_pi_half,
    deficit_at_zero,
    discord_at_pi_half,
    discord_at_zero,
    optimize,
    _profile_on_state,
)
from .entropies import HALF_PI
from .errors import NoBracket, PairNotBorn
from .model import ModelParams, XState, thermal_xstate
from .oracle import minimize_profile

_BISECT_XTOL = 1e-10
#: sign changes below this amplitude are underflow noise, not boundaries
_NOISE_FLOOR = 1e-12
_DEFAULT_T_WINDOW = (0.02, 60.0)


class BoundaryKind(str, Enum):
    ZERO = "zero"
    PI_HALF = "pi_half"
    ZERO_PRIME = "zero_prime"
    BRANCH_SWAP = "branch_swap"


# ---------------------------------------------------------------------------
# closed-form endpoint curvatures
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EndpointCurvatures:
    """Second theta-derivatives of the post-measurement entropy (post_*)
    and of the conditional entropy (cond_*) at both stationary endpoints."""

    post_at_zero: float
    post_at_pi_half: float
    cond_at_zero: float
    cond_at_pi_half: float

    def at(self, kind: CorrelationKind, anchor: BranchTag) -> float:
        """Curvature governing the given correlation at the given endpoint;
        the deficit profile inherits the post-measurement curvature, the
        discord profile the conditional one."""
        post = kind is CorrelationKind.WORK_DEFICIT
        if anchor is BranchTag.ZERO:
            return self.post_at_zero if post else self.cond_at_zero
        if anchor is BranchTag.PI_HALF:
            return self.post_at_pi_half if post else self.cond_at_pi_half
        raise ValueError(f"no endpoint curvature at {anchor}")


def post_curvature_at_zero(s: XState) -> float:
    """d^2 S~/dtheta^2 at theta = 0:

        (1/2) [ ((a-b)^2 - v^2) L(a,b) + ((b-d)^2 - v^2) L(b,d) ],
        L(x,y) = ln(x/y)/(x-y).

    Equivalent to the thermal-parameter closed form whose printed version
    carries cosh(J/B) misprints in two denominators; the equivalence (with
    cosh(J/T)) and the finite-difference gate are both enforced in tests.
    """
    a, b, d, v = s.a, s.b, s.d, s.v
    v2 = v * v
    return 0.5 * (
        ((a - b) ** 2 - v2) * log_ratio_over_diff(a, b)
        + ((b - d) ** 2 - v2) * log_ratio_over_diff(b, d)
    )


def _pi_half_pieces(s: XState) -> tuple[float, float, float, float]:
    """(r, F, G, one_minus_r) shared by both pi/2 curvatures."""
    a, b, d, v = s.a, s.b, s.d, s.v
    r = math.hypot(a - d, 2.0 * v)
    one_minus_r = 4.0 * ((a + b) * (b + d) - v * v) / (1.0 + r)
    one_minus_r = max(one_minus_r, 5e-324)
    k = (1.0 - 4.0 * b) / r
    log_ratio = math.log(1.0 + r) - math.log(one_minus_r)
    f_term = 2.0 * (v * v / r) * (1.0 - k * k) * log_ratio
    g_term = (1.0 + k) ** 2 / (1.0 + r) + (1.0 - k) ** 2 / one_minus_r
    return r, f_term, g_term, one_minus_r


def post_curvature_at_pi_half(s: XState) -> float:
    """d^2 S~/dtheta^2 at theta = pi/2:

        8 v^2 (ab + bd - ad - b^2 + v^2)/r^3 * ln((1+r)/(1-r))
        - (a-d)^2/2 * [ (1 + (1-4b)/r)^2/(1+r) + (1 - (1-4b)/r)^2/(1-r) ].
    """
    if half_gap_is_zero(s):
        return -((1.0 - 4.0 * s.b) ** 2)
    _, f_term, g_term, _ = _pi_half_pieces(s)
    return f_term - 0.5 * (s.a - s.d) ** 2 * g_term


def cond_curvature_at_zero(s: XState) -> float:
    """d^2 Sbar/dtheta^2 at theta = 0: the post-measurement curvature plus
    the marginal term (a-d)/2 * ln((b+d)/(a+b))."""
    return post_curvature_at_zero(s) + 0.5 * (s.a - s.d) * math.log(
        (s.b + s.d) / (s.a + s.b)
    )


def cond_curvature_at_pi_half(s: XState) -> float:
    """d^2 Sbar/dtheta^2 at theta = pi/2:

        2 v^2/r [1 - ((a-2b+d)/r)^2] ln((1+r)/(1-r))
        + (a-d)^2/2 [ 2 - (1 + (a-2b+d)/r)^2/(1+r) - (1 - (a-2b+d)/r)^2/(1-r) ]

    (the two printed terms are joined by "+"; the sign is pinned by the
    finite-difference gate and by the high-temperature limit (J^2-Jz^2)/4T^2).
    """
    if half_gap_is_zero(s):
        return -((1.0 - 4.0 * s.b) ** 2) + (s.a - s.d) ** 2
    _, f_term, g_term, _ = _pi_half_pieces(s)
    return f_term + 0.5 * (s.a - s.d) ** 2 * (2.0 - g_term)


def half_gap_is_zero(s: XState) -> bool:
    return s.a == s.d and s.v == 0.0


def curvatures(p: ModelParams) -> EndpointCurvatures:
    """All four endpoint curvatures of the thermal state at once (they share
    the state construction, so computing the full set costs nothing)."""
    s = thermal_xstate(p)
    return EndpointCurvatures(
        post_at_zero=post_curvature_at_zero(s),
        post_at_pi_half=post_curvature_at_pi_half(s),
        cond_at_zero=cond_curvature_at_zero(s),
        cond_at_pi_half=cond_curvature_at_pi_half(s),
    )


def asymptote(J: float, Jz: float) -> float | None:
    """Large-T limit of both curvature boundaries, B/|J| = sqrt(1-(Jz/J)^2);
    None when |Jz| > |J| (the boundaries then close at finite T)."""
    ratio = Jz / J
    if abs(ratio) > 1.0:
        return None
    return math.sqrt(1.0 - ratio * ratio)


# ---------------------------------------------------------------------------
# boundary tracing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundaryPoint:
    T: float
    B: float
    residual: float


@dataclass(frozen=True)
class BoundaryCurve:
    kind: BoundaryKind
    correlation: CorrelationKind
    points: tuple[BoundaryPoint, ...]
    asymptote_B: float | None = None


def _interior_minimum(
    p: ModelParams, kind: CorrelationKind, grid_n: int = 361
) -> tuple[float, float] | None:
    """Deepest interior local minimum (theta, value) of the profile, or None."""
    s = thermal_xstate(p)
    prof = _profile_on_state(p, s, kind)
    grid = np.linspace(0.0, HALF_PI, grid_n)
    scan = minimize_profile(
        lambda t: float(prof(t)), grid=grid, f_grid=np.asarray(prof(grid), float)
    )
    if not scan.interior:
        return None
    return min(scan.interior, key=lambda tv: tv[1])


def _endpoint_value(corr: CorrelationKind, p: ModelParams) -> float:
    return (
        deficit_at_zero(p)
        if corr is CorrelationKind.WORK_DEFICIT
        else discord_at_zero(p)
    )


def zero_prime_gap(corr: CorrelationKind, p: ModelParams) -> float:
    """value(theta=0) minus the coexisting interior minimum value; its zero
    is the first-order-like boundary.  Raises PairNotBorn when the profile
    has no interior local minimum."""
    interior = _interior_minimum(p, corr, grid_n=541)
    if interior is None:
        raise PairNotBorn(f"no interior extremum pair at T={p.T}, B={p.B}")
    return _endpoint_value(corr, p) - interior[1]


def _boundary_gap(
    kind: BoundaryKind, corr: CorrelationKind, p: ModelParams
) -> float:
    """The defining residual whose root is the boundary."""
    if kind is BoundaryKind.ZERO:
        return curvatures(p).at(corr, BranchTag.ZERO)
    if kind is BoundaryKind.PI_HALF:
        return curvatures(p).at(corr, BranchTag.PI_HALF)
    if kind is BoundaryKind.BRANCH_SWAP:
        if corr is CorrelationKind.WORK_DEFICIT:
            return deficit_at_zero(p) - deficit_at_pi_half(p)
        return discord_at_zero(p) - discord_at_pi_half(p)
    if kind is BoundaryKind.ZERO_PRIME:
        return zero_prime_gap(corr, p)
    raise ValueError(f"unknown boundary kind {kind}")


def pair_birth_temperature(
    corr: CorrelationKind | str,
    J: float,
    Jz: float,
    B: float,
    t_window: tuple[float, float],
    *,
    xtol: float = 1e-6,
    scan_points: int = 256,
) -> float:
    """Highest temperature in the window at which the profile still has an
    interior local-minimum/maximum pair (the fold where the pair is born).

    Located by bisection on the existence predicate; raises PairNotBorn
    when the profile is monotone across the whole window.
    """
    corr = CorrelationKind(corr)

    def has_pair(t: float) -> bool:
        return _interior_minimum(ModelParams(J, Jz, B, t), corr, grid_n=541) is not None

    ts = np.linspace(t_window[0], t_window[1], scan_points)
    flags = [has_pair(float(t)) for t in ts]
    if not any(flags):
        raise PairNotBorn(f"profile is monotone across T window {t_window} at B={B}")
    last = max(i for i, fl in enumerate(flags) if fl)
    if last == len(ts) - 1:
        return float(ts[-1])
    lo, hi = float(ts[last]), float(ts[last + 1])
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        if has_pair(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _zero_prime_roots(
    corr: CorrelationKind,
    J: float,
    Jz: float,
    B: float,
    t_window: tuple[float, float],
) -> list[BoundaryPoint]:
    """Root of the zero-prime gap, searched only inside the (narrow) band
    where the extremum pair exists.

    The band is anchored at the pi/2 curvature boundary (where the interior
    minimum detaches from the endpoint) and capped at the pair-birth fold,
    so a coarse whole-window scan cannot miss it.
    """
    try:
        anchors = solve_boundary_temperature(
            BoundaryKind.PI_HALF, corr, J, Jz, B, t_window
        )
        t_anchor = max(pt.T for pt in anchors)
    except NoBracket:
        t_anchor = t_window[0]
    search_top = min(t_window[1], t_anchor + max(0.75 * t_anchor, 0.2))
    t_birth = pair_birth_temperature(
        corr, J, Jz, B, (t_anchor * (1.0 + 1e-9), search_top)
    )

    def g(t: float) -> float:
        try:
            return zero_prime_gap(corr, ModelParams(J, Jz, B, t))
        except PairNotBorn:
            return math.nan

    brackets = find_bracket(
        g, t_anchor * (1.0 + 1e-6), t_birth * (1.0 - 1e-9), 128,
        min_amplitude=_NOISE_FLOOR,
    )
    if not brackets:
        raise NoBracket(
            f"zero-prime boundary absent for B={B}: the interior minimum never "
            "reaches the endpoint value"
        )
    points = []
    for lo, hi, flo, fhi in brackets:
        t_root = lo if lo == hi else bisect(g, lo, hi, xtol=_BISECT_XTOL, flo=flo, fhi=fhi)
        points.append(BoundaryPoint(T=t_root, B=B, residual=abs(g(t_root))))
    return sorted(points, key=lambda pt: pt.T)


def solve_boundary_temperature(
    kind: BoundaryKind | str,
    corr: CorrelationKind | str,
    J: float,
    Jz: float,
    B: float,
    t_window: tuple[float, float] = _DEFAULT_T_WINDOW,
    *,
    scan_points: int = 96,
) -> list[BoundaryPoint]:
    """All boundary temperatures at fixed field, bisected to 1e-10 in T.

    Multi-valued boundaries (two brackets in the window) yield one point per
    bracket, ordered by T.  Raises NoBracket when the window contains none.
    """
    kind = BoundaryKind(kind)
    corr = CorrelationKind(corr)
    if kind is BoundaryKind.ZERO_PRIME:
        return _zero_prime_roots(corr, J, Jz, B, t_window)

    def g(t: float) -> float:
        return _boundary_gap(kind, corr, ModelParams(J, Jz, B, t))

    brackets = find_bracket(
        g, t_window[0], t_window[1], scan_points, min_amplitude=_NOISE_FLOOR
    )
    if not brackets:
        raise NoBracket(f"{kind.value} boundary absent for B={B} in T window {t_window}")
    points = []
    for lo, hi, flo, fhi in brackets:
        t_root = lo if lo == hi else bisect(g, lo, hi, xtol=_BISECT_XTOL, flo=flo, fhi=fhi)
        points.append(BoundaryPoint(T=t_root, B=B, residual=abs(g(t_root))))
    return sorted(points, key=lambda pt: pt.T)


def solve_boundary_field(
    kind: BoundaryKind | str,
    corr: CorrelationKind | str,
    J: float,
    Jz: float,
    T: float,
    b_window: tuple[float, float],
    *,
    scan_points: int = 96,
) -> BoundaryPoint:
    """Boundary field at fixed temperature (used e.g. to compare a boundary
    against its large-T asymptote).  Returns the smallest-B root."""
    kind = BoundaryKind(kind)
    corr = CorrelationKind(corr)

    def g(b: float) -> float:
        try:
            return _boundary_gap(kind, corr, ModelParams(J, Jz, b, T))
        except PairNotBorn:
            return math.nan

    brackets = find_bracket(
        g, b_window[0], b_window[1], scan_points, min_amplitude=_NOISE_FLOOR
    )
    if not brackets:
        raise NoBracket(f"{kind.value} boundary absent for T={T} in B window {b_window}")
    lo, hi, flo, fhi = brackets[0]
    b_root = lo if lo == hi else bisect(g, lo, hi, xtol=_BISECT_XTOL, flo=flo, fhi=fhi)
    return BoundaryPoint(T=T, B=b_root, residual=abs(g(b_root)))


def trace_boundary(
    kind: BoundaryKind | str,
    corr: CorrelationKind | str,
    J: float,
    Jz: float,
    b_values,
    t_window: tuple[float, float] = _DEFAULT_T_WINDOW,
) -> BoundaryCurve:
    """Trace a boundary by sweeping the field and solving in T at each value.

    Sweep points where the curve is absent are skipped; NoBracket is raised
    only when the whole sweep produced nothing.
    """
    kind = BoundaryKind(kind)
    corr = CorrelationKind(corr)
    points: list[BoundaryPoint] = []
    missing: Exception | None = None
    for b in np.asarray(b_values, dtype=float):
        try:
            points.extend(
                solve_boundary_temperature(kind, corr, J, Jz, float(b), t_window)
            )
        except (NoBracket, PairNotBorn) as exc:
            missing = exc
    if not points:
        raise NoBracket(
            f"{kind.value} boundary absent across the sweep ({missing})"
        )
    points.sort(key=lambda pt: (pt.B, pt.T))
    return BoundaryCurve(
        kind=kind,
        correlation=corr,
        points=tuple(points),
        asymptote_B=(
            asymptote(J, Jz)
            if kind in (BoundaryKind.ZERO, BoundaryKind.PI_HALF)
            else None
        ),
    )


# ---------------------------------------------------------------------------
# rasterization
# ---------------------------------------------------------------------------


def worker_count() -> int:
    """Thread count for data-parallel sweeps, from XXZCORR_THREADS
    (default 1; results are index-ordered, so the count never changes
    output)."""
    try:
        return max(1, int(os.environ.get("XXZCORR_THREADS", "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class PhaseDiagram:
    correlation: CorrelationKind
    t_values: tuple[float, ...]
    b_values: tuple[float, ...]
    #: labels[i][j] is the branch at (t_values[i], b_values[j])
    labels: tuple[tuple[BranchTag, ...], ...]
    boundaries: tuple[BoundaryCurve, ...] = field(default_factory=tuple)


def rasterize(
    J: float,
    Jz: float,
    t_range: tuple[float, float],
    b_range: tuple[float, float],
    resolution: int,
    kind: CorrelationKind | str,
) -> PhaseDiagram:
    """Label a (T, B) grid by the optimizer's winning branch and overlay
    every boundary that exists in the window."""
    if resolution < 16:
        raise ValueError(f"resolution must be >= 16, got {resolution}")
    kind = CorrelationKind(kind)
    ts = np.linspace(t_range[0], t_range[1], resolution)
    bs = np.linspace(b_range[0], b_range[1], resolution)

    def label_row(t: float) -> tuple[BranchTag, ...]:
        return tuple(
            optimize(ModelParams(J, Jz, float(b), float(t)), kind).branch for b in bs
        )

    workers = worker_count()
    if workers > 1:
        # rows are independent; collect in index order for determinism
        with ThreadPoolExecutor(max_workers=workers) as pool:
            labels = tuple(pool.map(label_row, (float(t) for t in ts)))
    else:
        labels = tuple(label_row(float(t)) for t in ts)
    curves = []
    for bkind in BoundaryKind:
        try:
            curves.append(
                trace_boundary(bkind, kind, J, Jz, bs, t_window=t_range)
            )
        except (NoBracket, PairNotBorn):
            continue
    return PhaseDiagram(
        correlation=kind,
        t_values=tuple(float(t) for t in ts),
        b_values=tuple(float(b) for b in bs),
        labels=labels,
        boundaries=tuple(curves),
    )
