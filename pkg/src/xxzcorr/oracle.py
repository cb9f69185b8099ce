"""Brute-force matrix path: explicit 4x4 states, projectors, a self-contained
Jacobi eigensolver, and grid-scan minimization.

Nothing here uses the closed forms from `entropies`; this module is the
ground truth they are tested against.  The measurement basis is

    V(theta, phi) = [[cos(t/2), -e^{-i phi} sin(t/2)],
                     [e^{i phi} sin(t/2), cos(t/2)]],
    P_k = V |k><k| V^dagger,

acting on qubit B, i.e. through I (x) P_k.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ._numerics import shannon
from .errors import DegenerateOutcome, InvalidState, NotHermitian
from .model import XState

HALF_PI = math.pi / 2.0

_HERM_TOL = 1e-14
_TRACE_TOL = 1e-12
_PK_FLOOR = 1e-14


def assemble_state(s: XState) -> np.ndarray:
    """Dense 4x4 density matrix of an X state (complex, Hermitian)."""
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = s.a
    rho[1, 1] = rho[2, 2] = s.b
    rho[1, 2] = rho[2, 1] = s.v
    rho[3, 3] = s.d
    return rho


def check_density(rho: np.ndarray) -> None:
    """Validate Hermiticity, unit trace and positivity of a density matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise InvalidState(f"expected 4x4 matrix, got {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > _HERM_TOL:
        raise InvalidState("density matrix is not Hermitian")
    if abs(rho.trace().real - 1.0) > _TRACE_TOL:
        raise InvalidState(f"trace {rho.trace().real} != 1")
    vals, _, _ = eig4(rho)
    if vals[-1] < -_TRACE_TOL:
        raise InvalidState(f"negative eigenvalue {vals[-1]}")


def measurement_direction(theta: float, phi: float) -> np.ndarray:
    """The SU(2) rotation V(theta, phi) defining the measurement basis."""
    ct, st = math.cos(theta / 2.0), math.sin(theta / 2.0)
    ep = complex(math.cos(phi), math.sin(phi))
    return np.array([[ct, -st / ep], [st * ep, ct]], dtype=complex)


def projectors(theta: float, phi: float) -> tuple[np.ndarray, np.ndarray]:
    """Rank-1 projectors P0, P1 onto the rotated basis of qubit B."""
    v = measurement_direction(theta, phi)
    p0 = np.outer(v[:, 0], v[:, 0].conj())
    p1 = np.outer(v[:, 1], v[:, 1].conj())
    return p0, p1


def _measurement_ops(theta: float, phi: float) -> tuple[np.ndarray, np.ndarray]:
    p0, p1 = projectors(theta, phi)
    eye = np.eye(2, dtype=complex)
    return np.kron(eye, p0), np.kron(eye, p1)


def post_measure(rho: np.ndarray, theta: float, phi: float) -> np.ndarray:
    """Nonselective post-measurement state sum_k (I x P_k) rho (I x P_k)."""
    m0, m1 = _measurement_ops(theta, phi)
    return m0 @ rho @ m0.conj().T + m1 @ rho @ m1.conj().T


def trace_out_a(rho: np.ndarray) -> np.ndarray:
    """Partial trace over qubit A (the first factor)."""
    return rho[:2, :2] + rho[2:, 2:]


def trace_out_b(rho: np.ndarray) -> np.ndarray:
    """Partial trace over qubit B (the second factor)."""
    return np.array(
        [
            [rho[0, 0] + rho[1, 1], rho[0, 2] + rho[1, 3]],
            [rho[2, 0] + rho[3, 1], rho[2, 2] + rho[3, 3]],
        ]
    )


@dataclass(frozen=True)
class MeasurementOutcome:
    """Born probability and conditional state of A for one outcome.

    `state_a` is None when the probability is numerically zero.
    """

    probability: float
    state_a: np.ndarray | None


def conditional_outcomes(
    rho: np.ndarray, theta: float, phi: float, *, strict: bool = False
) -> list[MeasurementOutcome]:
    """Born probabilities p_k and conditional states rho_{A|k}.

    With strict=True a numerically impossible outcome (p_k < 1e-14) raises
    DegenerateOutcome; otherwise its conditional state is reported as None
    and contributes nothing to averaged quantities.
    """
    out = []
    for mk in _measurement_ops(theta, phi):
        sel = mk @ rho @ mk.conj().T
        pk = float(sel.trace().real)
        if pk < _PK_FLOOR:
            if strict:
                raise DegenerateOutcome(f"outcome probability {pk} < {_PK_FLOOR}")
            out.append(MeasurementOutcome(max(pk, 0.0), None))
            continue
        out.append(MeasurementOutcome(pk, trace_out_b(sel) / pk))
    return out


def average_conditional_entropy(rho: np.ndarray, theta: float, phi: float) -> float:
    """sum_k p_k S(rho_{A|k}), the outcome-averaged entropy of A."""
    total = 0.0
    for oc in conditional_outcomes(rho, theta, phi):
        if oc.state_a is not None:
            total += oc.probability * shannon(eig2(oc.state_a))
    return total


def eig2(h: np.ndarray) -> np.ndarray:
    """Eigenvalues of a 2x2 Hermitian matrix, descending."""
    mean = (h[0, 0].real + h[1, 1].real) / 2.0
    gap = math.hypot((h[0, 0].real - h[1, 1].real) / 2.0, abs(h[0, 1]))
    return np.array([mean + gap, mean - gap])


def eig4(h: np.ndarray, *, max_sweeps: int = 30) -> tuple[np.ndarray, np.ndarray, bool]:
    """Eigen-decomposition of a 4x4 Hermitian matrix by cyclic Jacobi
    rotations.

    Returns (eigenvalues descending, eigenvector columns in the same order,
    converged flag).  Self-contained on purpose: the closed forms are
    validated against this routine, so it must not share code with them.
    """
    a = np.asarray(h, dtype=complex)
    if a.shape != (4, 4):
        raise NotHermitian(f"expected 4x4 matrix, got {a.shape}")
    if np.max(np.abs(a - a.conj().T)) > _HERM_TOL * max(1.0, np.max(np.abs(a))):
        raise NotHermitian("matrix is not Hermitian within 1e-14")
    a = (a + a.conj().T) / 2.0
    vecs = np.eye(4, dtype=complex)
    scale = max(1.0, float(np.max(np.abs(a))))
    converged = False
    for _ in range(max_sweeps):
        off = math.sqrt(
            sum(abs(a[p, q]) ** 2 for p in range(4) for q in range(p + 1, 4))
        )
        if off <= 1e-15 * scale:
            converged = True
            break
        for p in range(4):
            for q in range(p + 1, 4):
                apq = a[p, q]
                if abs(apq) <= 1e-18 * scale:
                    continue
                # absorb the phase, then a standard real Jacobi rotation
                ph = apq / abs(apq)
                tau = (a[q, q].real - a[p, p].real) / (2.0 * abs(apq))
                t = math.copysign(1.0, tau) / (
                    abs(tau) + math.sqrt(1.0 + tau * tau)
                )
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                g = np.eye(4, dtype=complex)
                g[p, p] = c
                g[p, q] = s * ph
                g[q, p] = -s * np.conj(ph)
                g[q, q] = c
                a = g.conj().T @ a @ g
                vecs = vecs @ g
    vals = a.diagonal().real.copy()
    order = np.argsort(-vals, kind="stable")
    return vals[order], vecs[:, order], converged


def entropy4(rho: np.ndarray) -> float:
    """Von Neumann entropy of a 4x4 density matrix via the Jacobi solver."""
    vals, _, _ = eig4(rho)
    return shannon(np.clip(vals, 0.0, None))


# ---------------------------------------------------------------------------
# scan-and-refine minimization over the measurement angle
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProfileMinimum:
    """Global minimum of a profile over [0, pi/2] plus every refined
    interior local minimum (profiles here have at most two interior
    extrema, so a bracketing grid scan is exhaustive)."""

    theta: float
    value: float
    interior: tuple[tuple[float, float], ...]
    at_zero: float
    at_pi_half: float


def _parabolic_refine(
    f: Callable[[float], float],
    x1: float,
    x2: float,
    x3: float,
    f1: float,
    f2: float,
    f3: float,
    *,
    xtol: float = 1e-10,
    max_iter: int = 300,
) -> tuple[float, float]:
    """Shrink a bracketing triple (f2 <= f1, f3) by successive parabolic
    interpolation with bisection safeguards."""
    for it in range(max_iter):
        if x3 - x1 < xtol:
            break
        den = (x2 - x1) * (f2 - f3) - (x2 - x3) * (f2 - f1)
        u = math.nan
        if den != 0.0:
            num = (x2 - x1) ** 2 * (f2 - f3) - (x2 - x3) ** 2 * (f2 - f1)
            u = x2 - 0.5 * num / den
        # fall back to stepping into the larger half interval
        force_bisect = it % 4 == 3
        if force_bisect or not math.isfinite(u) or not (x1 < u < x3) or abs(u - x2) < 1e-14:
            u = 0.5 * (x1 + x2) if (x2 - x1) > (x3 - x2) else 0.5 * (x2 + x3)
        fu = f(u)
        if fu <= f2:
            if u < x2:
                x3, f3 = x2, f2
            else:
                x1, f1 = x2, f2
            x2, f2 = u, fu
        else:
            if u < x2:
                x1, f1 = u, fu
            else:
                x3, f3 = u, fu
    return x2, f2


def minimize_profile(
    f: Callable[[float], float],
    grid_n: int = 181,
    *,
    grid: np.ndarray | None = None,
    f_grid: np.ndarray | None = None,
) -> ProfileMinimum:
    """Dense theta scan over [0, pi/2] followed by parabolic refinement of
    every bracketed interior local minimum.

    `grid`/`f_grid` let a vectorized caller supply precomputed samples; `f`
    is then only used for refinement points.  Global ties (within 1e-12)
    resolve to the smaller angle.
    """
    if grid is None:
        grid = np.linspace(0.0, HALF_PI, grid_n)
    if len(grid) < 91:
        raise ValueError(f"grid must have >= 91 points, got {len(grid)}")
    if f_grid is None:
        f_grid = np.array([f(t) for t in grid], dtype=float)

    interior: list[tuple[float, float]] = []
    n = len(grid)
    for i in range(1, n - 1):
        if f_grid[i] < f_grid[i - 1] and f_grid[i] <= f_grid[i + 1]:
            th, val = _parabolic_refine(
                f,
                float(grid[i - 1]),
                float(grid[i]),
                float(grid[i + 1]),
                float(f_grid[i - 1]),
                float(f_grid[i]),
                float(f_grid[i + 1]),
            )
            if 0.0 < th < HALF_PI:
                interior.append((th, val))

    candidates = [(0.0, float(f_grid[0]))]
    candidates += interior
    candidates.append((HALF_PI, float(f_grid[-1])))
    best_val = min(val for _, val in candidates)
    # ties to the smaller angle
    theta, value = next(
        (th, val) for th, val in sorted(candidates) if val <= best_val + 1e-12
    )
    return ProfileMinimum(
        theta=theta,
        value=value,
        interior=tuple(sorted(interior)),
        at_zero=float(f_grid[0]),
        at_pi_half=float(f_grid[-1]),
    )


def brute_force_minimize(
    s: XState, objective: str = "post", grid_n: int = 181
) -> tuple[float, float]:
    """Minimize an entropy profile through the matrix path only.

    objective: "post" for S(rho_bar), "conditional" for S(rho_bar)-S(rho_bar_B).
    phi is pinned to 0 (the profiles are phi independent, which is verified
    separately).  Returns (theta_min, value).
    """
    if grid_n < 91:
        raise ValueError(f"grid_n must be >= 91, got {grid_n}")
    rho = assemble_state(s)

    if objective == "post":
        def f(theta: float) -> float:
            return entropy4(post_measure(rho, theta, 0.0))
    elif objective == "conditional":
        def f(theta: float) -> float:
            bar = post_measure(rho, theta, 0.0)
            return entropy4(bar) - shannon(eig2(trace_out_a(bar)))
    else:
        raise ValueError(f"unknown objective {objective!r}")

    res = minimize_profile(f, grid_n)
    return res.theta, res.value
