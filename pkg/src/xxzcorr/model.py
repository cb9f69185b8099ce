"""Two-qubit XXZ dimer in a uniform field: thermal X state and scalar
thermodynamics.

The Hamiltonian is

    H = -(1/2) [J (sx sx + sy sy) + Jz sz sz] - (B/2)(sz1 + sz2),

whose Gibbs state at temperature T (energy units) is an X matrix with
independent entries (a, b, d, v).  Everything downstream is a function of
those four numbers, so this module is the single place where (J, Jz, B, T)
enter.  All Boltzmann factors are evaluated relative to the ground level so
that the entries stay finite deep into the low-temperature regime.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._numerics import deriv1_central, xlogx
from .errors import InvalidState, NonPositiveTemperature, RangeUnsupported

#: below T / max(|J|, |Jz|, |B|, 1) = MIN_REDUCED_T the evaluation is refused
MIN_REDUCED_T = 1e-3

_NORM_TOL = 1e-12
_PSD_TOL = 1e-12


@dataclass(frozen=True)
class ModelParams:
    """Couplings (J, Jz), field B and temperature T, all in energy units."""

    J: float
    Jz: float
    B: float
    T: float

    def __post_init__(self):
        vals = (self.J, self.Jz, self.B, self.T)
        if not all(math.isfinite(x) for x in vals):
            raise InvalidState(f"non-finite model parameters {vals}")
        if self.T <= 0.0:
            raise NonPositiveTemperature(f"T must be > 0, got {self.T}")
        if self.T / self.scale < MIN_REDUCED_T:
            raise RangeUnsupported(
                f"T/scale = {self.T / self.scale:.3g} < {MIN_REDUCED_T:g}"
            )

    @property
    def scale(self) -> float:
        """Energy scale used for the reduced-temperature cutoff."""
        return max(abs(self.J), abs(self.Jz), abs(self.B), 1.0)

    def with_temperature(self, T: float) -> "ModelParams":
        return ModelParams(self.J, self.Jz, self.B, T)


@dataclass(frozen=True)
class Spectrum:
    """The four energy levels E1..E4 of the dimer Hamiltonian."""

    levels: tuple[float, float, float, float]


@dataclass(frozen=True)
class XState:
    """Independent entries (a, b, d, v) of a two-qubit X density matrix

        [[a, 0, 0, 0],
         [0, b, v, 0],
         [0, v, b, 0],
         [0, 0, 0, d]]

    with a + 2b + d = 1 and b >= |v| (positive semidefiniteness).
    """

    a: float
    b: float
    d: float
    v: float

    def __post_init__(self):
        a, b, d, v = self.a, self.b, self.d, self.v
        if not all(math.isfinite(x) for x in (a, b, d, v)):
            raise InvalidState("non-finite X-state entries")
        if a < -_PSD_TOL or d < -_PSD_TOL or b - abs(v) < -_PSD_TOL:
            raise InvalidState(
                f"X state not positive semidefinite: a={a}, b={b}, d={d}, v={v}"
            )
        if abs(a + 2.0 * b + d - 1.0) > _NORM_TOL:
            raise InvalidState(f"trace a+2b+d = {a + 2 * b + d} != 1")

    # one-site magnetization and the two independent pair correlators
    @property
    def s1(self) -> float:
        return self.a - self.d

    @property
    def c1(self) -> float:
        return 2.0 * self.v

    @property
    def c3(self) -> float:
        return self.a - 2.0 * self.b + self.d


def spectrum(p: ModelParams) -> Spectrum:
    """Energy levels: E1,2 = -Jz/2 +- B (polarized doublet) and
    E3,4 = Jz/2 +- J (central block)."""
    return Spectrum(
        (
            -p.Jz / 2.0 + p.B,
            -p.Jz / 2.0 - p.B,
            p.Jz / 2.0 + p.J,
            p.Jz / 2.0 - p.J,
        )
    )


def _shifted_weights(p: ModelParams) -> tuple[np.ndarray, float, float]:
    """Boltzmann weights exp((Emin - Ei)/T), their sum, and Emin.

    The largest weight is exactly 1, so ratios of weights never overflow.
    """
    e = np.array(spectrum(p).levels)
    emin = float(e.min())
    w = np.exp((emin - e) / p.T)
    return w, float(w.sum()), emin


def partition_function(p: ModelParams) -> float:
    """Partition function Z = sum_i exp(-Ei/T).

    Computed in shifted form; may overflow to inf at the extreme
    low-temperature corner of the supported range, in which case
    `log_partition_function` is the representable alternative.
    """
    _, zs, emin = _shifted_weights(p)
    logz = math.log(zs) - emin / p.T
    if logz > 700.0:
        return math.inf
    return math.exp(logz)


def log_partition_function(p: ModelParams) -> tuple[float, float]:
    """(ln of the shifted sum, shift), with ln Z = first + second.

    The shift equals -Emin/T, i.e. the ground-state Boltzmann exponent.
    """
    _, zs, emin = _shifted_weights(p)
    return math.log(zs), -emin / p.T


def thermal_xstate(p: ModelParams) -> XState:
    """Gibbs-state entries

        a = exp((Jz/2+B)/T)/Z        b = exp(-Jz/2T) cosh(J/T)/Z
        d = exp((Jz/2-B)/T)/Z        v = exp(-Jz/2T) sinh(J/T)/Z

    evaluated as ratios of shifted Boltzmann weights (E1 <-> d, E2 <-> a,
    E3 <-> b-v, E4 <-> b+v)."""
    w, zs, _ = _shifted_weights(p)
    a = w[1] / zs
    d = w[0] / zs
    b = (w[2] + w[3]) / (2.0 * zs)
    v = (w[3] - w[2]) / (2.0 * zs)
    return XState(float(a), float(b), float(d), float(v))


def state_eigenvalues(s: XState) -> tuple[float, float, float, float]:
    """Eigenvalues (a, b+v, b-v, d) of the X matrix."""
    return (s.a, s.b + s.v, s.b - s.v, s.d)


def thermo_entropy(p: ModelParams) -> float:
    """Thermodynamic entropy S = ln Z + <E>/T in nats.

    Identical (analytically and numerically) to -sum(lam ln lam) over the
    Gibbs eigenvalues; evaluated in shifted form so the free-energy and
    spectral routes agree to machine precision at low T.
    """
    s = thermal_xstate(p)
    return float(-sum(xlogx(x) for x in state_eigenvalues(s)))


def heat_capacity(p: ModelParams) -> float:
    """Heat capacity C = T dS/dT.

    Central finite difference with relative step 1e-5 and one Richardson
    extrapolation step; relative accuracy ~1e-7 away from T-range edges.
    """
    h = 1e-5 * p.T

    def s_of_t(t: float) -> float:
        return thermo_entropy(p.with_temperature(t))

    return p.T * deriv1_central(s_of_t, p.T, h)
