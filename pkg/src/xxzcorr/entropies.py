"""Closed-form entropies of the measured X state as functions of the polar
measurement angle theta.

A projective measurement on qubit B along the Bloch direction (theta, phi)
dephases the X state into a spectrum that depends on theta only.  The four
post-measurement eigenvalues factor into two 2x2 blocks,

    L12 = (1/4) [1 + (a-d) cos t  +-  sqrt((a-d+(1-4b)cos t)^2 + 4 v^2 sin^2 t)]
    L34 = (1/4) [1 - (a-d) cos t  +-  sqrt((a-d-(1-4b)cos t)^2 + 4 v^2 sin^2 t)]

and every entropy below is a Shannon sum over them.  All functions accept a
scalar or an ndarray of angles; angles outside [0, pi/2] are legal (the
profiles are even in theta and symmetric under theta -> pi - theta), which
the endpoint finite-difference stencils rely on.
"""
from __future__ import annotations

import numpy as np

from ._numerics import LN2, deriv1_onesided4, xlogx
from .model import XState

HALF_PI = float(np.pi / 2.0)


def post_eigs(s: XState, theta):
    """Eigenvalues of the dephased (post-measurement) two-qubit state.

    Returns an array of shape (4,) for scalar theta, else (4,) + theta.shape.
    Tiny negative values from cancellation are clipped to zero.
    """
    t = np.asarray(theta, dtype=float)
    c, sn = np.cos(t), np.sin(t)
    ad = s.a - s.d
    q = 1.0 - 4.0 * s.b
    v2 = 4.0 * s.v * s.v
    rp = np.sqrt((ad + q * c) ** 2 + v2 * sn * sn)
    rm = np.sqrt((ad - q * c) ** 2 + v2 * sn * sn)
    lam = np.stack(
        [
            1.0 + ad * c + rp,
            1.0 + ad * c - rp,
            1.0 - ad * c + rm,
            1.0 - ad * c - rm,
        ]
    ) / 4.0
    return np.clip(lam, 0.0, None)


def post_entropy(s: XState, theta):
    """Post-measurement entropy S~(theta) = -sum(L ln L), in nats."""
    lam = post_eigs(s, theta)
    return -np.sum(xlogx(lam), axis=0)


def post_marginal_entropy(s: XState, theta):
    """Entropy of measured qubit B after the measurement:

        ln 2 - (1/2)[(1+u)ln(1+u) + (1-u)ln(1-u)],  u = (a-d) cos(theta).
    """
    u = (s.a - s.d) * np.cos(np.asarray(theta, dtype=float))
    return LN2 - 0.5 * (xlogx(1.0 + u) + xlogx(1.0 - u))


def conditional_entropy(s: XState, theta):
    """Measurement-averaged conditional entropy of qubit A,

        Sbar(theta) = S~(theta) - S(rho_B after measurement).
    """
    return post_entropy(s, theta) - post_marginal_entropy(s, theta)


def reduced_entropy(s: XState) -> float:
    """Entropy of the unmeasured reduced state of B: diag(a+b, b+d)."""
    return float(-(xlogx(s.a + s.b) + xlogx(s.b + s.d)))


def endpoint_derivative_check(s: XState, functional: str = "post") -> tuple[float, float]:
    """Numerical d/dtheta of the chosen profile at theta = 0 and pi/2.

    Both endpoints are stationary for every valid X state, so the returned
    estimates (4th-order one-sided differences, step 1e-4) should be below
    ~1e-7 in magnitude; this is the cheap self-test for transcription
    errors in the closed forms.
    """
    if functional == "post":
        f = lambda t: float(post_entropy(s, t))
    elif functional == "conditional":
        f = lambda t: float(conditional_entropy(s, t))
    else:
        raise ValueError(f"unknown functional {functional!r}")
    h = 1e-4
    return (
        deriv1_onesided4(f, 0.0, h),
        deriv1_onesided4(f, HALF_PI, -h),
    )
