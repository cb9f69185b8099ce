"""Cross-route property suites: closed forms vs the brute-force matrix path.

Each suite draws seeded random parameters, checks one family of identities
at its stated tolerance, and reports pass/fail with the worst deviation.
These are the same checks the test suite runs; they are packaged here so a
deployment can re-run them on demand (`verify` endpoint / CLI command).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._numerics import deriv2_central, lncosh, shannon
from .correlations import (
    CorrelationKind,
    deficit_at_pi_half,
    deficit_at_zero,
    deficit_heat_relation,
    discord_at_pi_half,
    discord_at_zero,
    optimize,
)
from .entropies import (
    HALF_PI,
    conditional_entropy,
    endpoint_derivative_check,
    post_eigs,
    post_entropy,
    post_marginal_entropy,
    reduced_entropy,
)
from .errors import NearTransition
from .model import ModelParams, XState, thermal_xstate
from .oracle import (
    assemble_state,
    average_conditional_entropy,
    brute_force_minimize,
    eig2,
    eig4,
    entropy4,
    post_measure,
    trace_out_a,
    trace_out_b,
)
from .phasemap import (
    cond_curvature_at_pi_half,
    cond_curvature_at_zero,
    curvatures,
    post_curvature_at_pi_half,
    post_curvature_at_zero,
)

DEFAULT_SEED = 20240817


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    detail: str


def _random_params(rng: np.random.Generator) -> ModelParams:
    j = rng.uniform(0.3, 1.5) * rng.choice([-1.0, 1.0])
    jz = rng.uniform(-1.8, 1.8)
    b = rng.uniform(-1.8, 1.8)
    t = rng.uniform(0.15, 3.0)
    return ModelParams(float(j), float(jz), float(b), float(t))


def _random_params_nonzero_field(rng: np.random.Generator) -> ModelParams:
    while True:
        p = _random_params(rng)
        if abs(p.B) >= 0.1:
            return p


def suite_oracle_closed_form(seed: int = DEFAULT_SEED, draws: int = 200) -> SuiteResult:
    """Closed-form entropies/eigenvalues vs the matrix path on random
    thermal states and angles: eigenvalues to 1e-12, entropies to 1e-10."""
    rng = np.random.default_rng(seed)
    worst_eig = worst_ent = 0.0
    for _ in range(draws):
        p = _random_params(rng)
        s = thermal_xstate(p)
        theta = float(rng.uniform(0.0, HALF_PI))
        phi = float(rng.uniform(0.0, 2.0 * math.pi))
        rho_bar = post_measure(assemble_state(s), theta, phi)
        oracle_vals, _, _ = eig4(rho_bar)
        closed_vals = np.sort(post_eigs(s, theta))[::-1]
        worst_eig = max(worst_eig, float(np.max(np.abs(oracle_vals - closed_vals))))
        worst_ent = max(
            worst_ent,
            abs(entropy4(rho_bar) - float(post_entropy(s, theta))),
            abs(shannon(eig2(trace_out_a(rho_bar))) - float(post_marginal_entropy(s, theta))),
            abs(
                (entropy4(rho_bar) - shannon(eig2(trace_out_a(rho_bar))))
                - float(conditional_entropy(s, theta))
            ),
            abs(shannon(eig2(trace_out_b(assemble_state(s)))) - reduced_entropy(s)),
        )
    passed = worst_eig <= 1e-12 and worst_ent <= 1e-10
    return SuiteResult(
        "oracle-closed-form",
        passed,
        f"max eigenvalue dev {worst_eig:.2e} (tol 1e-12), "
        f"max entropy dev {worst_ent:.2e} (tol 1e-10) on {draws} draws",
    )


def suite_phi_independence(seed: int = DEFAULT_SEED, draws: int = 12) -> SuiteResult:
    """Matrix-path entropies over a 16-point azimuthal grid: spread < 1e-10."""
    rng = np.random.default_rng(seed)
    phis = np.linspace(0.0, 2.0 * math.pi, 16, endpoint=False)
    worst = 0.0
    for _ in range(draws):
        s = thermal_xstate(_random_params(rng))
        theta = float(rng.uniform(0.0, HALF_PI))
        rho = assemble_state(s)
        for fn in (
            lambda ph: entropy4(post_measure(rho, theta, ph)),
            lambda ph: shannon(eig2(trace_out_a(post_measure(rho, theta, ph)))),
            lambda ph: average_conditional_entropy(rho, theta, ph),
        ):
            vals = [fn(float(ph)) for ph in phis]
            worst = max(worst, max(vals) - min(vals))
    return SuiteResult(
        "phi-independence",
        worst < 1e-10,
        f"max spread over 16 azimuths {worst:.2e} (tol 1e-10)",
    )


def suite_endpoint_stationarity(seed: int = DEFAULT_SEED, draws: int = 100) -> SuiteResult:
    """First derivatives of both profiles vanish at theta = 0 and pi/2."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for i in range(draws):
        if i % 2 == 0:
            s = thermal_xstate(_random_params(rng))
        else:
            raw = rng.uniform(0.05, 1.0, size=3)
            norm = raw[0] + 2.0 * raw[1] + raw[2]
            a, b, d = raw[0] / norm, raw[1] / norm, raw[2] / norm
            s = XState(a, b, d, float(rng.uniform(-0.95, 0.95)) * b)
        for functional in ("post", "conditional"):
            d0, dp = endpoint_derivative_check(s, functional)
            worst = max(worst, abs(d0), abs(dp))
    return SuiteResult(
        "endpoint-stationarity",
        worst < 1e-7,
        f"max |dS/dtheta| at endpoints {worst:.2e} (tol 1e-7)",
    )


def _misprinted_post_curvature_zero(p: ModelParams) -> float:
    """Literal transcription of the zero-endpoint curvature with the
    misprinted cosh(J/B) denominators; kept only so the typo gate can show
    it fails the finite-difference check."""
    t1 = (p.B / p.T) * math.sinh(p.B / p.T) + (
        math.cosh(p.B / p.T) - math.exp(-p.Jz / p.T) * math.cosh(p.J / p.T)
    ) * (p.Jz / p.T - lncosh(p.J / p.T))
    el = lncosh(p.J / p.T)
    t2 = -0.5 * math.exp(-p.Jz / p.T) * (
        ((p.Jz + p.B) / p.T - el) / (math.exp((p.Jz + p.B) / p.T) - math.cosh(p.J / p.B))
        + ((p.Jz - p.B) / p.T - el) / (math.exp((p.Jz - p.B) / p.T) - math.cosh(p.J / p.B))
    ) * math.sinh(p.J / p.T) ** 2
    z = 2.0 * (
        math.exp(p.Jz / (2 * p.T)) * math.cosh(p.B / p.T)
        + math.exp(-p.Jz / (2 * p.T)) * math.cosh(p.J / p.T)
    )
    return (t1 * math.exp(p.Jz / (2 * p.T)) + t2 * math.exp(-p.Jz / (2 * p.T))) / z


def _minus_variant(s: XState) -> float:
    """The rejected minus-sign reading of the conditional pi/2 curvature
    (the two printed terms lack a connecting operator; "minus" is the
    alternative that the finite-difference gate must rule out)."""
    r = math.hypot(s.a - s.d, 2.0 * s.v)
    one_minus_r = 4.0 * ((s.a + s.b) * (s.b + s.d) - s.v * s.v) / (1.0 + r)
    k = (1.0 - 4.0 * s.b) / r
    log_ratio = math.log(1.0 + r) - math.log(max(one_minus_r, 5e-324))
    f_term = 2.0 * (s.v * s.v / r) * (1.0 - k * k) * log_ratio
    g_term = (1.0 + k) ** 2 / (1.0 + r) + (1.0 - k) ** 2 / max(one_minus_r, 5e-324)
    return f_term - 0.5 * (s.a - s.d) ** 2 * (2.0 - g_term)


def suite_curvature_typo_check(seed: int = DEFAULT_SEED, draws: int = 200) -> SuiteResult:
    """All four closed-form curvatures vs finite differences of the
    profiles, within max(1e-7, 1e-6|value|); additionally the misprinted
    variants (cosh(J/B) denominators; minus-sign pi/2 conditional term)
    must fail the same gate."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    misprint_caught = sign_caught = False
    h = 1e-3
    for _ in range(draws):
        p = _random_params_nonzero_field(rng)
        s = thermal_xstate(p)
        checks = [
            (post_curvature_at_zero(s), lambda t: float(post_entropy(s, t)), 0.0),
            (post_curvature_at_pi_half(s), lambda t: float(post_entropy(s, t)), HALF_PI),
            (cond_curvature_at_zero(s), lambda t: float(conditional_entropy(s, t)), 0.0),
            (cond_curvature_at_pi_half(s), lambda t: float(conditional_entropy(s, t)), HALF_PI),
        ]
        for closed, prof, anchor in checks:
            fd = deriv2_central(prof, anchor, h)
            tol = max(1e-7, 1e-6 * abs(closed))
            worst = max(worst, abs(closed - fd) / tol)
        fd0 = deriv2_central(lambda t: float(post_entropy(s, t)), 0.0, h)
        if abs(_misprinted_post_curvature_zero(p) - fd0) > 100.0 * max(1e-7, 1e-6 * abs(fd0)):
            misprint_caught = True
        fdp = deriv2_central(lambda t: float(conditional_entropy(s, t)), HALF_PI, h)
        if abs(_minus_variant(s) - fdp) > 100.0 * max(1e-7, 1e-6 * abs(fdp)):
            sign_caught = True
    passed = worst <= 1.0 and misprint_caught and sign_caught
    return SuiteResult(
        "curvature-typo-check",
        passed,
        f"worst dev/tol {worst:.3f} on {draws} draws; misprinted cosh(J/B) "
        f"variant rejected: {misprint_caught}; minus-sign variant rejected: {sign_caught}",
    )


def suite_q0_identity(seed: int = DEFAULT_SEED, draws: int = 100) -> SuiteResult:
    """Discord and deficit coincide at theta = 0 (two independent closed
    forms agree to 1e-12)."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(draws):
        p = _random_params(rng)
        worst = max(worst, abs(discord_at_zero(p) - deficit_at_zero(p)))
    return SuiteResult(
        "q0-identity", worst <= 1e-12, f"max |Q0 - D0| = {worst:.2e} (tol 1e-12)"
    )


def suite_high_t_expansions() -> SuiteResult:
    """Leading 1/T^2 terms of the endpoint branches and curvatures at
    T = 100, within 2 percent."""
    t = 100.0
    cases = []
    for (j, jz, b) in [(1.0, -0.9, 1.7), (1.0, 1.02, 1.0), (-1.2, 0.5, 0.8)]:
        p = ModelParams(j, jz, b, t)
        c = curvatures(p)
        t2 = t * t
        cases += [
            ("deficit_zero", deficit_at_zero(p), j * j / (4.0 * t2)),
            ("deficit_pi_half", deficit_at_pi_half(p), (j * j + jz * jz + b * b) / (8.0 * t2)),
            ("discord_pi_half", discord_at_pi_half(p), (j * j + jz * jz) / (8.0 * t2)),
            ("post_curv_zero", c.post_at_zero, (jz * jz - j * j + b * b) / (4.0 * t2)),
            ("post_curv_pi_half", c.post_at_pi_half, (j * j - jz * jz - b * b) / (4.0 * t2)),
            ("cond_curv_zero", c.cond_at_zero, (jz * jz - j * j) / (4.0 * t2)),
            ("cond_curv_pi_half", c.cond_at_pi_half, (j * j - jz * jz) / (4.0 * t2)),
        ]
    worst = max(abs(val - lead) / abs(lead) for _, val, lead in cases)
    return SuiteResult(
        "high-t-expansions",
        worst < 0.02,
        f"worst relative deviation from the 1/T^2 leading terms {worst:.2e} "
        f"(tol 2e-2) over {len(cases)} cases",
    )


def suite_heat_relation() -> SuiteResult:
    """T dD/dT = C_measured - C residual below 1e-5 away from transitions."""
    worst = 0.0
    skipped = 0
    for (j, jz, b, t) in [
        (1.0, -0.9, 1.7, 0.8),
        (1.0, -0.9, 1.7, 0.4),
        (1.0, -0.9, 1.7, 1000.0),
        (1.0, 1.02, 1.0, 1.3),
    ]:
        try:
            worst = max(worst, deficit_heat_relation(ModelParams(j, jz, b, t)))
        except NearTransition:
            skipped += 1
    return SuiteResult(
        "heat-relation",
        worst < 1e-5 and skipped == 0,
        f"max residual {worst:.2e} (tol 1e-5), {skipped} points skipped",
    )


def suite_optimize_oracle_equivalence(
    seed: int = DEFAULT_SEED, draws: int = 200
) -> SuiteResult:
    """Branch optimizer vs pure matrix-path minimization: value to 1e-8,
    angle to 1e-5."""
    from .model import thermo_entropy

    rng = np.random.default_rng(seed)
    worst_val = worst_ang = 0.0
    for i in range(draws):
        p = _random_params(rng)
        kind = CorrelationKind.WORK_DEFICIT if i % 2 == 0 else CorrelationKind.DISCORD
        res = optimize(p, kind)
        s = thermal_xstate(p)
        if kind is CorrelationKind.WORK_DEFICIT:
            theta_bf, entropy_min = brute_force_minimize(s, "post", grid_n=181)
            val_bf = entropy_min - thermo_entropy(p)
        else:
            theta_bf, cond_min = brute_force_minimize(s, "conditional", grid_n=181)
            val_bf = cond_min - (thermo_entropy(p) - reduced_entropy(s))
        worst_val = max(worst_val, abs(res.value - val_bf))
        worst_ang = max(worst_ang, abs(res.optimal_angle - theta_bf))
    passed = worst_val <= 1e-8 and worst_ang <= 1e-5
    return SuiteResult(
        "optimize-oracle-equivalence",
        passed,
        f"max value dev {worst_val:.2e} (tol 1e-8), "
        f"max angle dev {worst_ang:.2e} (tol 1e-5) on {draws} draws",
    )


def suite_nonnegativity(seed: int = DEFAULT_SEED, draws: int = 120) -> SuiteResult:
    """Optimized correlations are nonnegative (>> -1e-12) and equal the
    minimum of their reported branch values."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    consistent = True
    for i in range(draws):
        p = _random_params(rng)
        kind = CorrelationKind.WORK_DEFICIT if i % 2 == 0 else CorrelationKind.DISCORD
        res = optimize(p, kind)
        worst = min(worst, res.value)
        branch_vals = [res.at_zero, res.at_pi_half] + (
            [res.interior[1]] if res.interior else []
        )
        if res.value > min(branch_vals) + 1e-10:
            consistent = False
    return SuiteResult(
        "nonnegativity",
        worst >= -1e-12 and consistent,
        f"min optimized value {worst:.2e} (floor -1e-12); branch consistency {consistent}",
    )


SUITES = {
    "oracle-closed-form": suite_oracle_closed_form,
    "phi-independence": suite_phi_independence,
    "endpoint-stationarity": suite_endpoint_stationarity,
    "curvature-typo-check": suite_curvature_typo_check,
    "q0-identity": suite_q0_identity,
    "high-t-expansions": lambda seed=DEFAULT_SEED: suite_high_t_expansions(),
    "heat-relation": lambda seed=DEFAULT_SEED: suite_heat_relation(),
    "optimize-oracle-equivalence": suite_optimize_oracle_equivalence,
    "nonnegativity": suite_nonnegativity,
}


def run_suites(names=None, seed: int = DEFAULT_SEED) -> list[SuiteResult]:
    """Run the named suites (all by default) with a fixed seed."""
    if names is None:
        names = list(SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise KeyError(f"unknown suites: {unknown}; available: {sorted(SUITES)}")
    return [SUITES[name](seed=seed) for name in names]
