"""Temperature path scans and the classification of sudden transitions.

Cooling the dimer at fixed field drags the optimal measurement angle
through up to three regimes (constant 0, variable interior, constant pi/2).
The crossings come in three flavors:

* branch-swap jump       -- the global minimum hops between the two
                            endpoints (angle jump of pi/2);
* continuous, Landau-like -- an interior minimum detaches from an endpoint
                            where the endpoint curvature vanishes, with
                            theta ~ A |T - Tc|^(1/2);
* combined               -- the angle first jumps by a finite amount < pi/2
                            (endpoint value degenerate with a coexisting
                            interior minimum) and drifts continuously after.

Transition temperatures are detected on the scan and then polished on their
defining equations, so the reported Tc is far more accurate than the scan
resolution.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from ._numerics import bisect, find_bracket
from .correlations import BranchTag, CorrelationKind, optimize
from .entropies import HALF_PI
from .errors import (
    IllConditionedFit,
    InsufficientPoints,
    NoTransitionFound,
    PairNotBorn,
)
from .correlations import (
    _profile_on_state,
    deficit_at_pi_half,
    deficit_at_zero,
    discord_at_pi_half,
    discord_at_zero,
)
from .model import ModelParams, thermal_xstate
from .phasemap import _interior_minimum, curvatures

_JUMP_REFINE_THRESHOLD = 0.01  # rad between adjacent samples triggers refinement
_REFINE_XTOL = 1e-6


class TransitionKind(str, Enum):
    BRANCH_SWAP_JUMP = "branch_swap_jump"
    CONTINUOUS_SECOND_ORDER = "continuous_second_order"
    COMBINED_FIRST_ORDER = "combined_first_order"


class TransitionSide(str, Enum):
    FROM_ZERO = "from_zero"
    FROM_PI_HALF = "from_pi_half"


@dataclass(frozen=True)
class ExponentFit:
    beta: float
    amplitude: float
    r_squared: float
    window_frac: float
    n_points: int


@dataclass(frozen=True)
class TransitionReport:
    kind: TransitionKind
    T_c: float
    angle_jump: float
    side: TransitionSide
    fit: ExponentFit | None = None


@dataclass(frozen=True)
class PathSample:
    T: float
    angle: float
    value: float
    branch: BranchTag


@dataclass(frozen=True)
class PathScan:
    """Samples of the optimized correlation along a constant-field path,
    ordered by decreasing temperature (the cooling direction)."""

    J: float
    Jz: float
    B: float
    kind: CorrelationKind
    samples: tuple[PathSample, ...]

    def params(self, T: float) -> ModelParams:
        return ModelParams(self.J, self.Jz, self.B, T)


def _sample(J: float, Jz: float, B: float, kind: CorrelationKind, T: float) -> PathSample:
    res = optimize(ModelParams(J, Jz, B, T), kind)
    return PathSample(T=T, angle=res.optimal_angle, value=res.value, branch=res.branch)


def scan_path(
    J: float,
    Jz: float,
    B: float,
    t_range: tuple[float, float],
    n: int,
    kind: CorrelationKind | str,
) -> PathScan:
    """Sample the optimizer over a T grid, with adaptive bisection (to 1e-6
    in T) around every branch change or angle step above 0.01 rad."""
    if n < 200:
        raise ValueError(f"path scans need n >= 200 samples, got {n}")
    kind = CorrelationKind(kind)
    ts = np.linspace(max(t_range), min(t_range), n)
    samples = [_sample(J, Jz, B, kind, float(t)) for t in ts]

    def needs_split(hi: PathSample, lo: PathSample) -> bool:
        if hi.T - lo.T <= _REFINE_XTOL:
            return False
        return (
            hi.branch is not lo.branch
            or abs(hi.angle - lo.angle) > _JUMP_REFINE_THRESHOLD
        )

    # worklist of adjacent pairs; midpoints are inserted until resolved
    i = 0
    while i < len(samples) - 1:
        hi, lo = samples[i], samples[i + 1]
        if needs_split(hi, lo):
            mid = _sample(J, Jz, B, kind, 0.5 * (hi.T + lo.T))
            samples.insert(i + 1, mid)
        else:
            i += 1
    return PathScan(J=J, Jz=Jz, B=B, kind=kind, samples=tuple(samples))


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------


def _endpoint_value(scan: PathScan, side: TransitionSide, T: float) -> float:
    p = scan.params(T)
    if scan.kind is CorrelationKind.WORK_DEFICIT:
        return deficit_at_zero(p) if side is TransitionSide.FROM_ZERO else deficit_at_pi_half(p)
    return discord_at_zero(p) if side is TransitionSide.FROM_ZERO else discord_at_pi_half(p)


def _interior_at(scan: PathScan, T: float) -> tuple[float, float] | None:
    return _interior_minimum(scan.params(T), scan.kind, grid_n=541)


def _anchor_of(side: TransitionSide) -> BranchTag:
    return BranchTag.ZERO if side is TransitionSide.FROM_ZERO else BranchTag.PI_HALF


def _polish_continuous(scan: PathScan, side: TransitionSide, t_mid: float) -> float | None:
    """Root of the endpoint curvature near t_mid, or None if absent (which
    is what distinguishes a combined transition from a continuous one)."""
    anchor = _anchor_of(side)

    def curv(t: float) -> float:
        return curvatures(scan.params(t)).at(scan.kind, anchor)

    width = max(2e-3 * max(t_mid, 1.0), 1e-4)
    brackets = find_bracket(curv, t_mid - width, t_mid + width, 41, min_amplitude=1e-13)
    if not brackets:
        return None
    lo, hi, flo, fhi = brackets[0]
    return bisect(curv, lo, hi, xtol=1e-10, flo=flo, fhi=fhi)


def _polish_combined(scan: PathScan, side: TransitionSide, t_lo: float, t_hi: float) -> float:
    """Root of (endpoint value - interior minimum value) inside the event
    interval: the exact degeneracy temperature of the two competing minima."""

    def gap(t: float) -> float:
        interior = _interior_at(scan, t)
        if interior is None:
            raise PairNotBorn(f"interior minimum vanished during polish at T={t}")
        return _endpoint_value(scan, side, t) - interior[1]

    width = t_hi - t_lo
    return bisect(gap, t_lo - 2.0 * width, t_hi + 2.0 * width, xtol=1e-10)


def classify(scan: PathScan) -> list[TransitionReport]:
    """One report per branch change of the scan, ordered by decreasing T.

    Endpoint <-> interior events are continuous exactly when the endpoint
    curvature has a zero at the event (the interior minimum detaches from
    the endpoint); otherwise the angle jumps to a coexisting minimum and the
    event is combined first-order-like.  Direct endpoint <-> endpoint events
    are plain branch swaps.
    """
    events = [
        (scan.samples[i], scan.samples[i + 1])
        for i in range(len(scan.samples) - 1)
        if scan.samples[i].branch is not scan.samples[i + 1].branch
    ]
    if not events:
        raise NoTransitionFound("no branch change inside the scanned T range")

    reports: list[TransitionReport] = []
    for hi, lo in events:
        t_mid = 0.5 * (hi.T + lo.T)
        branches = {hi.branch, lo.branch}
        if branches == {BranchTag.ZERO, BranchTag.PI_HALF}:
            side = (
                TransitionSide.FROM_ZERO
                if hi.branch is BranchTag.ZERO
                else TransitionSide.FROM_PI_HALF
            )

            def swap_gap(t: float) -> float:
                p = scan.params(t)
                if scan.kind is CorrelationKind.WORK_DEFICIT:
                    return deficit_at_zero(p) - deficit_at_pi_half(p)
                return discord_at_zero(p) - discord_at_pi_half(p)

            width = max(hi.T - lo.T, 1e-9)
            t_c = bisect(swap_gap, lo.T - 2 * width, hi.T + 2 * width, xtol=1e-10)
            reports.append(
                TransitionReport(
                    kind=TransitionKind.BRANCH_SWAP_JUMP,
                    T_c=t_c,
                    angle_jump=HALF_PI,
                    side=side,
                )
            )
            continue

        endpoint_branch = next(b for b in branches if b is not BranchTag.INTERIOR)
        side = (
            TransitionSide.FROM_ZERO
            if endpoint_branch is BranchTag.ZERO
            else TransitionSide.FROM_PI_HALF
        )
        t_cont = _polish_continuous(scan, side, t_mid)
        if t_cont is not None:
            reports.append(
                TransitionReport(
                    kind=TransitionKind.CONTINUOUS_SECOND_ORDER,
                    T_c=t_cont,
                    angle_jump=0.0,
                    side=side,
                )
            )
            continue

        t_c = _polish_combined(scan, side, lo.T, hi.T)
        interior = _interior_at(scan, t_c)
        if interior is None:
            raise PairNotBorn(f"no interior minimum at polished T_c={t_c}")
        endpoint_angle = 0.0 if side is TransitionSide.FROM_ZERO else HALF_PI
        reports.append(
            TransitionReport(
                kind=TransitionKind.COMBINED_FIRST_ORDER,
                T_c=t_c,
                angle_jump=abs(interior[0] - endpoint_angle),
                side=side,
            )
        )
    return reports


# ---------------------------------------------------------------------------
# critical-exponent fitting
# ---------------------------------------------------------------------------


def fit_exponent(
    scan: PathScan, report: TransitionReport, window_frac: float
) -> ExponentFit:
    """Log-log fit of the order parameter against |T - Tc| on the variable
    side, restricted to |T - Tc|/Tc <= window_frac.

    The order parameter is theta for a from-zero transition and pi/2 - theta
    for a from-pi/2 one.  Also reports the R^2 of the (order parameter)^2
    vs |T - Tc| linear regression, which is the Landau mean-field signature.
    """
    if report.kind is not TransitionKind.CONTINUOUS_SECOND_ORDER:
        raise ValueError("exponent fits only apply to continuous transitions")
    if not 0.0 < window_frac <= 0.05:
        raise ValueError(f"window_frac must be in (0, 0.05], got {window_frac}")

    t_c = report.T_c
    xs, ys = [], []
    for s in scan.samples:
        if s.branch is not BranchTag.INTERIOR:
            continue
        if report.side is TransitionSide.FROM_ZERO:
            if s.T >= t_c:
                continue
            y = s.angle
        else:
            if s.T <= t_c:
                continue
            y = HALF_PI - s.angle
        x = abs(s.T - t_c)
        if x / t_c > window_frac or y <= 1e-9 or x <= 0.0:
            continue
        xs.append(x)
        ys.append(y)
    if len(xs) < 20:
        raise InsufficientPoints(
            f"{len(xs)} interior samples inside window {window_frac}; need >= 20"
        )
    xs = np.asarray(xs)
    ys = np.asarray(ys)
    beta, log_a = np.polyfit(np.log(xs), np.log(ys), 1)

    # mean-field signature: squared order parameter is linear in T - Tc
    w = ys * ys
    slope, icpt = np.polyfit(xs, w, 1)
    fitted = slope * xs + icpt
    ss_res = float(np.sum((w - fitted) ** 2))
    ss_tot = float(np.sum((w - w.mean()) ** 2))
    r_squared = 1.0 - ss_res / ss_tot if ss_tot > 0 else 0.0

    return ExponentFit(
        beta=float(beta),
        amplitude=float(math.exp(log_a)),
        r_squared=r_squared,
        window_frac=window_frac,
        n_points=len(xs),
    )


def attach_fit(
    scan: PathScan, report: TransitionReport, window_frac: float = 0.02
) -> TransitionReport:
    """Report with the exponent fit filled in (left as-is when the window
    holds too few samples)."""
    if report.kind is not TransitionKind.CONTINUOUS_SECOND_ORDER:
        return report
    try:
        return replace(report, fit=fit_exponent(scan, report, window_frac))
    except InsufficientPoints:
        return report


# ---------------------------------------------------------------------------
# Taylor expansions about the endpoints
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TaylorCoeffs:
    """Even-polynomial fit of a correlation profile about an endpoint.

    c2k is the coefficient of (theta - anchor)^(2k); for sextic fits,
    alpha1/alpha2 are the reduced coefficients after normalizing the sextic
    term to one."""

    anchor: BranchTag
    c0: float
    c2: float
    c4: float
    residual: float
    radius: float
    c6: float | None = None
    alpha1: float | None = None
    alpha2: float | None = None


def taylor_coeffs(
    p: ModelParams,
    kind: CorrelationKind | str,
    anchor: BranchTag | str,
    *,
    order: int = 4,
    radius: float = 0.15,
    n_samples: int = 81,
) -> TaylorCoeffs:
    """Least-squares even-polynomial fit of the profile on
    |theta - anchor| <= radius.

    order 4 fits 1, x^2, x^4; order 6 adds x^6 and reports the reduced
    coefficients alpha1 = c2/c6, alpha2 = c4/c6.
    """
    kind = CorrelationKind(kind)
    anchor = BranchTag(anchor)
    if order not in (4, 6):
        raise ValueError("order must be 4 or 6")
    if anchor is BranchTag.INTERIOR:
        raise ValueError("expansions anchor at an endpoint")

    s = thermal_xstate(p)
    prof = _profile_on_state(p, s, kind)
    if anchor is BranchTag.ZERO:
        thetas = np.linspace(0.0, radius, n_samples)
        x = thetas
    else:
        thetas = np.linspace(HALF_PI - radius, HALF_PI, n_samples)
        x = thetas - HALF_PI
    y = np.asarray(prof(thetas), dtype=float)

    # fit in tau = (x/radius)^2 for conditioning, then unscale; two guard
    # orders beyond the reported ones soak up the truncation tail, which
    # would otherwise bias c2 far beyond the curvature tolerance
    tau = (x / radius) ** 2
    m = order // 2
    n_cols = m + 3
    design = np.column_stack([tau**k for k in range(n_cols)])
    coef, _, rank, _ = np.linalg.lstsq(design, y, rcond=None)
    if rank < n_cols:
        raise IllConditionedFit(f"rank {rank} < {n_cols} in the expansion fit")
    residual = float(np.max(np.abs(design @ coef - y)))
    scaled = [float(coef[k]) / radius ** (2 * k) for k in range(m + 1)]

    if order == 4:
        return TaylorCoeffs(
            anchor=anchor,
            c0=scaled[0],
            c2=scaled[1],
            c4=scaled[2],
            residual=residual,
            radius=radius,
        )
    c6 = scaled[3]
    tiny = abs(c6) < 1e-12
    return TaylorCoeffs(
        anchor=anchor,
        c0=scaled[0],
        c2=scaled[1],
        c4=scaled[2],
        residual=residual,
        radius=radius,
        c6=c6,
        alpha1=None if tiny else scaled[1] / c6,
        alpha2=None if tiny else scaled[2] / c6,
    )


def polynomial_interior_extrema(coeffs: TaylorCoeffs) -> list[tuple[float, str]]:
    """Stationary points of the fitted even polynomial strictly inside
    (0, pi/2), as (theta, "min"|"max") pairs in absolute angle coordinates."""
    cs = [coeffs.c2, coeffs.c4] + ([coeffs.c6] if coeffs.c6 is not None else [])
    # d/dx sum c_{2k} x^{2k} = x * sum 2k c_{2k} x^{2k-2}; roots in u = x^2
    poly_u = [2.0 * (k + 1) * c for k, c in enumerate(cs)]
    if len(poly_u) < 2:
        return []
    roots = np.roots(list(reversed(poly_u)))
    out = []
    for u in np.atleast_1d(roots):
        if abs(u.imag) > 1e-12 or u.real <= 0.0:
            continue
        xv = math.sqrt(u.real)
        theta = xv if coeffs.anchor is BranchTag.ZERO else HALF_PI - xv
        if not 0.0 < theta < HALF_PI:
            continue
        # second derivative of the polynomial at xv (even in x, so the
        # anchor side does not matter)
        d2 = sum(2 * (k + 1) * (2 * k + 1) * c * xv ** (2 * k) for k, c in enumerate(cs))
        out.append((theta, "min" if d2 > 0 else "max"))
    return sorted(out)


# ---------------------------------------------------------------------------
# derivative structure across a transition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DerivativeJumps:
    """One-sided dV/dT and d2V/dT2 mismatches across a transition, with
    rough noise scales from step-halving."""

    d1_jump: float
    d2_jump: float
    d1_noise: float
    d2_noise: float


def derivative_discontinuities(
    scan: PathScan, report: TransitionReport, *, step: float | None = None
) -> DerivativeJumps:
    """One-sided cubic-extrapolated first and second T-derivatives of the
    optimized value on both sides of T_c and their jumps."""
    t_c = report.T_c
    h = step if step is not None else 1e-4 * max(t_c, 1.0)

    def value(t: float) -> float:
        return optimize(scan.params(t), scan.kind).value

    def one_sided(sign: float, hh: float) -> tuple[float, float]:
        xs = np.array([sign * k * hh for k in (1, 2, 3, 4)])
        ys = np.array([value(t_c + x) for x in xs])
        c3, c2, c1, _ = np.polyfit(xs, ys, 3)
        return float(c1), float(2.0 * c2)

    d1r, d2r = one_sided(+1.0, h)
    d1l, d2l = one_sided(-1.0, h)
    d1r2, d2r2 = one_sided(+1.0, 2.0 * h)
    d1l2, d2l2 = one_sided(-1.0, 2.0 * h)

    d1_noise = max(abs(d1r - d1r2), abs(d1l - d1l2)) + 1e-13 / h
    d2_noise = max(abs(d2r - d2r2), abs(d2l - d2l2)) + 1e-13 / (h * h)
    return DerivativeJumps(
        d1_jump=d1r - d1l,
        d2_jump=d2r - d2l,
        d1_noise=d1_noise,
        d2_noise=d2_noise,
    )
