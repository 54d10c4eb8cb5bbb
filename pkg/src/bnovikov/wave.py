"""Numerically exact periodic waves by Newton iteration on a cosine series.

The even 2pi-periodic profile ``w(z) = sum_n w_n cos(n z)`` and the speed ``c``
solve

    F(w; c) = (w - k^2 w'') (c - w^2)^(b/2) - d = 0

with the first harmonic pinned, ``w_1 = a``. The N+1 unknowns
(w_0, w_2, ..., w_N, c) are fixed by collocating F at N+1 points of [0, pi].
"""
from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field

import numpy as np

from .asymptotics import expansion_coeffs
from .errors import AmplitudeTooLarge, NoConvergence, ValidityViolated
from .params import ModelParams, equilibrium

log = logging.getLogger(__name__)

DEFAULT_N = 32
DEFAULT_TOL = 1e-12
MAX_ITER = 50
MAX_HALVINGS = 20
AMPLITUDE_LIMIT = 0.3


@dataclass
class FourierWave:
    params: ModelParams
    a: float
    N: int
    coeffs: np.ndarray
    c: float
    residual_norm: float = float("nan")
    history: list = field(default_factory=list, repr=False)

    def __call__(self, z, deriv=0):
        return evaluate(self.coeffs, z, deriv)

    def to_dict(self):
        p = self.params
        return {
            "schema": 1,
            "b": p.b,
            "k": p.k,
            "d": p.d,
            "a": self.a,
            "N": self.N,
            "c": self.c,
            "coeffs": [float(x) for x in self.coeffs],
            "residual_norm": self.residual_norm,
        }

    @classmethod
    def from_dict(cls, data):
        params = ModelParams(data["b"], data["k"], data["d"])
        coeffs = np.asarray(data["coeffs"], dtype=float)
        return cls(params, data["a"], int(data["N"]), coeffs, data["c"], data["residual_norm"])


def evaluate(coeffs, z, deriv=0):
    """Value of the ``deriv``-th z-derivative of a cosine series at ``z``."""
    coeffs = np.asarray(coeffs, dtype=float)
    z = np.asarray(z, dtype=float)
    n = np.arange(coeffs.size)
    phase = np.outer(z.ravel(), n)
    # d^j/dz^j cos(nz) = n^j cos(nz + j pi/2)
    vals = np.cos(phase + deriv * np.pi / 2.0) @ (coeffs * n.astype(float) ** deriv)
    return vals.reshape(z.shape) if z.ndim else float(vals[0])


def residual_grid(N):
    """Equispaced points of [0, pi] used for residual diagnostics, 2(N+1) of them."""
    return np.linspace(0.0, np.pi, 2 * (N + 1))


def collocation_points(N):
    return np.pi * (np.arange(N + 1) + 0.5) / (N + 1)


def periodic_grid(N):
    """Uniform grid on [0, 2pi) with 2(N+1) points."""
    M = 2 * (N + 1)
    return 2.0 * np.pi * np.arange(M) / M


def _residual(params, coeffs, c, z):
    w = evaluate(coeffs, z)
    wzz = evaluate(coeffs, z, 2)
    s = c - w * w
    if np.any(s <= 0.0):
        j = int(np.argmin(s))
        raise ValidityViolated("c - w^2 <= 0", z=float(np.atleast_1d(z)[j]))
    return (w - params.k**2 * wzz) * np.power(s, params.b / 2.0) - params.d


def profile_residual(wave: FourierWave, z=None):
    """F(w; k, d, c) on 2(N+1) equispaced points of [0, pi] (or on ``z``)."""
    if z is None:
        z = residual_grid(wave.N)
    return _residual(wave.params, wave.coeffs, wave.c, z)


def spectral_derivatives(wave: FourierWave, z=None):
    """First three z-derivatives on the uniform 2pi grid of size 2(N+1)."""
    if z is None:
        z = periodic_grid(wave.N)
    return evaluate(wave.coeffs, z, 1), evaluate(wave.coeffs, z, 2), evaluate(wave.coeffs, z, 3)


def _jacobian(params, coeffs, c, z):
    b, k2 = params.b, params.k**2
    n = np.arange(coeffs.size, dtype=float)
    cos_nz = np.cos(np.outer(z, n))
    w = cos_nz @ coeffs
    lin = cos_nz @ (coeffs * (1.0 + k2 * n * n))  # w - k^2 w''
    s = c - w * w
    sp = np.power(s, b / 2.0)
    spm1 = np.power(s, b / 2.0 - 1.0)
    dF_dcoef = (1.0 + k2 * n * n)[None, :] * cos_nz * sp[:, None] - (
        lin * b * spm1 * w
    )[:, None] * cos_nz
    dF_dc = lin * (b / 2.0) * spm1
    # drop the frozen first harmonic, append the speed column
    return np.column_stack([dF_dcoef[:, :1], dF_dcoef[:, 2:], dF_dc])


def _unpack(u, a, N):
    coeffs = np.empty(N + 1)
    coeffs[0] = u[0]
    coeffs[1] = a
    coeffs[2:] = u[1:N]
    return coeffs, u[N]


def initial_guess(params: ModelParams, a: float, N: int):
    eq = equilibrium(params)
    e = expansion_coeffs(params, eq)
    coeffs = np.zeros(N + 1)
    coeffs[0] = eq.w0 + a * a * e.e1
    coeffs[1] = a
    coeffs[2] = a * a * e.e2
    return coeffs, eq.c0 + a * a * e.c2


def check_validity(wave: FourierWave):
    """Pointwise c - w^2 > 0 and w - k^2 w'' > 0 on a 4N-point grid.

    Returns the two margins ``(min(c - w^2), min(w - k^2 w''))``.
    """
    z = 2.0 * np.pi * np.arange(4 * wave.N) / (4 * wave.N)
    w = wave(z)
    lin = w - wave.params.k**2 * wave(z, 2)
    speed_margin = float(np.min(wave.c - w * w))
    ellipticity_margin = float(np.min(lin))
    if speed_margin <= 0.0:
        raise ValidityViolated("c - w^2 <= 0", z=float(z[np.argmin(wave.c - w * w)]))
    if ellipticity_margin <= 0.0:
        raise ValidityViolated("w - k^2 w'' <= 0", z=float(z[np.argmin(lin)]))
    return speed_margin, ellipticity_margin


def newton_refine(params: ModelParams, a: float, N: int = DEFAULT_N, tol: float = DEFAULT_TOL) -> FourierWave:
    """Refine the second-order asymptotic wave to a converged cosine series.

    Damped Newton with step halving; raises :class:`NoConvergence` after
    ``MAX_ITER`` iterations or on stagnation.
    """
    if N < 8:
        raise ValueError(f"N must be at least 8 (got {N})")
    if tol < 1e-14:
        raise ValueError(f"tol must be at least 1e-14 (got {tol})")
    a = float(a)
    if abs(a) > AMPLITUDE_LIMIT:
        warnings.warn(f"|a| = {abs(a):g} beyond {AMPLITUDE_LIMIT}; attempting anyway", AmplitudeTooLarge, stacklevel=2)

    zc = collocation_points(N)
    zr = residual_grid(N)
    coeffs, c = initial_guess(params, a, N)
    u = np.concatenate([[coeffs[0]], coeffs[2:], [c]])

    def norm_at(u_):
        cf, c_ = _unpack(u_, a, N)
        return np.max(np.abs(_residual(params, cf, c_, zc)))

    history = []
    for it in range(MAX_ITER + 1):
        coeffs, c = _unpack(u, a, N)
        fine = float(np.max(np.abs(_residual(params, coeffs, c, zr))))
        history.append(fine)
        log.debug("newton iter %d residual %.3e", it, fine)
        if fine < tol:
            wave = FourierWave(params, a, N, coeffs, c, fine, history)
            check_validity(wave)
            return wave
        if it == MAX_ITER:
            break
        F = _residual(params, coeffs, c, zc)
        J = _jacobian(params, coeffs, c, zc)
        step = np.linalg.solve(J, -F)
        current = np.max(np.abs(F))
        lam = 1.0
        for _ in range(MAX_HALVINGS + 1):
            trial = u + lam * step
            try:
                trial_norm = norm_at(trial)
            except ValidityViolated:
                trial_norm = None
            if trial_norm is not None and trial_norm < current:
                u = trial
                break
            lam *= 0.5
        else:
            if trial_norm is None:
                raise ValidityViolated("every damped Newton step leaves the region c - w^2 > 0")
            raise NoConvergence(it + 1, fine, history)
    raise NoConvergence(MAX_ITER, history[-1], history)
