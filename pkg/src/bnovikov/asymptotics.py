"""Small-amplitude expansions of the periodic wave family.

    w(z; a) = w0 + a cos z + a^2 (e1 + e2 cos 2z) + O(a^3)
    c(a)    = c0 + a^2 c2 + O(a^4)
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import AmplitudeTooLarge
from .params import Equilibrium, ModelParams, equilibrium

AMPLITUDE_SOFT_CAP = 0.2


@dataclass(frozen=True)
class ExpansionCoeffs:
    e1: float
    e2: float
    c2: float
    e3: float  # 2 e1 - (c2 / c0) w0


@dataclass(frozen=True)
class WaveFamilyPoint:
    params: ModelParams
    a: float
    eq: Equilibrium
    coeffs: ExpansionCoeffs


def expansion_coeffs(params: ModelParams, eq: Equilibrium | None = None) -> ExpansionCoeffs:
    b, k, d = params.b, params.k, params.d
    eq = eq or equilibrium(params)
    k2 = k * k
    k4 = k2 * k2
    ratio = b / (1.0 + k2)
    d_root = math.exp(math.log(d) / (1.0 + b))

    bracket1 = -2.0 * (1.0 + k2) ** 2 + (-4.0 - 6.0 * k2 + k4) * b + (-2.0 - 2.0 * k2 + k4) * b * b
    e1 = bracket1 * ratio ** (-(2.0 + b) / (2.0 * (1.0 + b))) / (24.0 * (1.0 + b) * d_root * k2)

    bracket2 = (2.0 + 2.0 * b) + (4.0 + 3.0 * b) * k2 + (2.0 + b) * k4
    e2 = bracket2 * ratio ** (b / (2.0 * (1.0 + b))) / (12.0 * b * d_root * k2)

    c2 = (
        (10.0 + 8.0 * k2 - 2.0 * k4)
        + (20.0 + 12.0 * k2 + k4) * b
        + (10.0 + 4.0 * k2 + k4) * b * b
    ) / (12.0 * b * (1.0 + b))

    e3 = 2.0 * e1 - c2 / eq.c0 * eq.w0
    return ExpansionCoeffs(e1=e1, e2=e2, c2=c2, e3=e3)


def family_point(params: ModelParams, a: float) -> WaveFamilyPoint:
    eq = equilibrium(params)
    return WaveFamilyPoint(params=params, a=float(a), eq=eq, coeffs=expansion_coeffs(params, eq))


def _warn_amplitude(a):
    if abs(a) > AMPLITUDE_SOFT_CAP:
        warnings.warn(
            f"|a| = {abs(a):g} exceeds {AMPLITUDE_SOFT_CAP}; the O(a^3) truncation is unreliable",
            AmplitudeTooLarge,
            stacklevel=3,
        )


def wave_expansion(point: WaveFamilyPoint, z):
    """Second-order profile; accepts scalar or array ``z``."""
    a = point.a
    _warn_amplitude(a)
    e = point.coeffs
    z = np.asarray(z, dtype=float)
    out = point.eq.w0 + a * np.cos(z) + a * a * (e.e1 + e.e2 * np.cos(2.0 * z))
    return out if out.ndim else float(out)


def wave_expansion_zz(point: WaveFamilyPoint, z):
    """Exact second z-derivative of :func:`wave_expansion`."""
    a = point.a
    z = np.asarray(z, dtype=float)
    out = -a * np.cos(z) - 4.0 * a * a * point.coeffs.e2 * np.cos(2.0 * z)
    return out if out.ndim else float(out)


def speed_expansion(point: WaveFamilyPoint) -> float:
    return point.eq.c0 + point.a * point.a * point.coeffs.c2


def basis_functions(point: WaveFamilyPoint, z):
    """Critical-eigenspace basis at xi = 0, truncated after O(a).

    Returns ``(phi1, phi2, phi3)`` evaluated at ``z``.
    """
    a = point.a
    e = point.coeffs
    z = np.asarray(z, dtype=float)
    phi1 = np.cos(z) + a * (e.e3 + 2.0 * e.e2 * np.cos(2.0 * z))
    phi2 = np.sin(z) + 2.0 * a * e.e2 * np.sin(2.0 * z)
    phi3 = np.ones_like(z)
    if z.ndim == 0:
        return float(phi1), float(phi2), float(phi3)
    return phi1, phi2, phi3


def expansion_residual(point: WaveFamilyPoint, n_grid: int = 256) -> float:
    """Sup-norm over a uniform grid of (w - k^2 w'')(c - w^2)^(b/2) - d.

    The truncation is O(a^3) accurate, so this scales like |a|^3.
    """
    p = point.params
    z = np.linspace(0.0, 2.0 * np.pi, n_grid, endpoint=False)
    w = wave_expansion(point, z)
    wzz = wave_expansion_zz(point, z)
    c = speed_expansion(point)
    lhs = (w - p.k * p.k * wzz) * np.power(c - w * w, p.b / 2.0)
    return float(np.max(np.abs(lhs - p.d)))
