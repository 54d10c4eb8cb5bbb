"""Cross-checks between the closed-form predictions and the numerical oracles.

Each check returns a :class:`Check` carrying the measured and expected values,
so the CLI and the test-suite report the same numbers.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .asymptotics import expansion_residual, family_point
from .hill import DEFAULT_N, EIG_BACKWARD_TOL, bloch_eigs, constant_wave, omega, spectrum_symmetry_check, xi_sweep
from .modulation import Verdict, assemble_reduced, classify, critical_cubic, delta0
from .params import ModelParams, equilibrium
from .wave import newton_refine

RESIDUAL_AMPLITUDES = (0.0025, 0.005, 0.01, 0.02)
# growth above this counts as a genuine instability of the Hill spectrum
INSTABILITY_THRESHOLD = 10.0 * EIG_BACKWARD_TOL
ORACLE_AMPLITUDE = 0.05
ORACLE_XIS = tuple(np.linspace(0.0025, 0.05, 20))


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    measured: object
    expected: object

    def line(self):
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag} {self.name}: measured={self.measured} expected={self.expected}"


def residual_ratios(params: ModelParams, amplitudes=RESIDUAL_AMPLITUDES):
    """R(2a)/R(a) for consecutive amplitudes; O(a^3) truncation gives about 8."""
    R = [expansion_residual(family_point(params, a)) for a in amplitudes]
    return [R[i + 1] / R[i] for i in range(len(R) - 1)]


def check_residual_order(params):
    ratios = residual_ratios(params)
    ok = all(6.0 <= r <= 10.0 for r in ratios)
    return Check("residual order", ok, [round(r, 4) for r in ratios], "each in [6, 10]")


def unperturbed_slopes(params: ModelParams):
    """d/dxi of Omega_{0,xi} and Omega_{+-1,xi} at xi = 0, differentiated by hand."""
    eq = equilibrium(params)
    k = params.k
    s0 = -(k**3) * eq.alpha_tilde
    s1 = 2.0 * k**3 * eq.alpha_tilde / (1.0 + k * k)
    return np.array([s0, s1, s1])


def reduced_slopes(params: ModelParams):
    """Roots of the a = 0 reduced cubic to leading order in xi: diag(B)/(i xi)."""
    xi = 1.0
    B = assemble_reduced(params, 0.0, xi).B
    return np.sort(np.real(np.diag(B) / (1j * xi)))


def check_slopes(params, tol=1e-12):
    expected = np.sort(unperturbed_slopes(params))
    measured = reduced_slopes(params)
    err = float(np.max(np.abs(measured - expected)))
    return Check("a=0 slope identity", err <= tol * max(1.0, float(np.max(np.abs(expected)))), measured.tolist(), expected.tolist())


def delta_relative_error(params, xi=1e-5):
    """Assembled-cubic discriminant at a = 0 against the closed-form Delta(0, xi)."""
    assembled = critical_cubic(params, 0.0, xi).Delta
    closed = delta0(params, xi)
    return abs(assembled - closed) / abs(closed)


def check_delta(params, xi=1e-5, tol=1e-8):
    err = delta_relative_error(params, xi)
    return Check("Delta(0,xi) two-path", err <= tol, f"{err:.3e}", f"<= {tol:g}")


def hill_baseline_error(params, xi, N=DEFAULT_N):
    """Max distance between Hill eigenvalues of the constant state and i*Omega_{n,xi}."""
    eq = equilibrium(params)
    sample = bloch_eigs(constant_wave(params, eq), xi, N)
    n = np.arange(-N, N + 1)
    exact = 1j * omega(n, xi, eq, params.k)
    got = sample.eigenvalues[np.argsort(sample.eigenvalues.imag)]
    return float(np.max(np.abs(got - exact[np.argsort(exact.imag)])))


def check_hill_baseline(params, xis=(0.01, 0.1, 0.37)):
    err = max(hill_baseline_error(params, xi) for xi in xis)
    return Check("Hill a=0 baseline", err <= 1e-12, f"{err:.3e}", "<= 1e-12")


def check_newton(params, a=ORACLE_AMPLITUDE, N=32, tol=1e-12):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        wave = newton_refine(params, a, N, tol)
    return Check("Newton refinement", wave.residual_norm <= tol, f"{wave.residual_norm:.3e}", f"<= {tol:g}"), wave


def oracle_sweep(wave, xis=ORACLE_XIS, N=DEFAULT_N):
    return xi_sweep(wave, xis, N)


def empirical_unstable(samples, xi_max=0.05):
    """Growth above threshold at some 0 < |xi| <= xi_max.

    xi = 0 is skipped: there the critical triple is a Jordan block at the
    origin and its computed real parts are eigensolver noise of size
    (eps ||P||)^(1/3), not growth.
    """
    return any(s.max_real_part > INSTABILITY_THRESHOLD for s in samples if 0.0 < abs(s.xi) <= xi_max)


def check_symmetry(samples, tol=1e-8):
    bad = [s.xi for s in samples if not spectrum_symmetry_check(s, tol)]
    return Check("lambda -> -conj(lambda) symmetry", not bad, f"{len(samples) - len(bad)}/{len(samples)} symmetric", "all")


def check_verdict(params, samples):
    verdict = classify(params).verdict
    predicted = verdict is Verdict.MODULATIONALLY_UNSTABLE
    observed = empirical_unstable(samples)
    growth = max(s.max_real_part for s in samples if s.xi != 0.0)
    return Check(
        "Hill vs index verdict",
        verdict is not Verdict.MARGINAL and predicted == observed,
        f"{'Unstable' if observed else 'Stable'} (max Re = {growth:.3e})",
        f"{'Unstable' if predicted else 'Stable'} ({verdict.value})",
    )


def run_all(params: ModelParams):
    checks = [check_residual_order(params), check_slopes(params), check_delta(params), check_hill_baseline(params)]
    newton, wave = check_newton(params)
    checks.append(newton)
    samples = oracle_sweep(wave)
    checks.append(check_symmetry(samples))
    checks.append(check_verdict(params, samples))
    return checks
