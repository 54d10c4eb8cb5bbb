"""Model parameters, the effective potential and the constant-state equilibrium.

The traveling-wave profile phi of the b-Novikov equation obeys

    phi - phi'' = d / (c - phi^2)^(b/2),

whose periodic orbits oscillate around the minimum of the effective potential

    V(phi; d, c) = int_0^phi d / (c - s^2)^(b/2) ds - phi^2 / 2.

After the scaling z = k x, the constant state w0 and the bifurcation speed c0
at which cos(z) enters the kernel of the linearised profile operator are known
in closed form; see :func:`equilibrium`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from scipy.integrate import quad

from .errors import BifurcationInvalid, DomainError, NoMinimum, NonPositiveParameter

QUAD_EPSABS = 1e-12
BISECT_TOL = 1e-12
BISECT_MAXITER = 200


def c_min(b: float, d: float) -> float:
    """Smallest speed for which V has an interior local minimum."""
    return (b + 1.0) * math.exp(-b / (b + 1.0) * math.log(b) + 2.0 / (b + 1.0) * math.log(d))


@dataclass(frozen=True)
class ModelParams:
    b: float
    k: float
    d: float
    c_min: float = field(init=False)

    def __post_init__(self):
        for name in ("b", "k", "d"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise NonPositiveParameter(name, value)
        object.__setattr__(self, "c_min", c_min(self.b, self.d))


def validate_params(b, k, d) -> ModelParams:
    return ModelParams(float(b), float(k), float(d))


@dataclass(frozen=True)
class Equilibrium:
    w0: float
    c0: float
    alpha_tilde: float  # c0 - w0^2
    alpha: float  # c0 - (1+b) w0^2


def _check_domain(phi, c):
    if not phi * phi < c:
        raise DomainError(f"phi^2 = {phi * phi!r} must be below c = {c!r}")


def _power(base, exponent):
    return math.exp(exponent * math.log(base))


def potential_d1(phi, d, c, b):
    """V'(phi) = d (c - phi^2)^(-b/2) - phi."""
    _check_domain(phi, c)
    return d * _power(c - phi * phi, -b / 2.0) - phi


def potential_d2(phi, d, c, b):
    """V''(phi) = d b phi (c - phi^2)^(-(b+2)/2) - 1."""
    _check_domain(phi, c)
    return d * b * phi * _power(c - phi * phi, -(b + 2.0) / 2.0) - 1.0


def potential(phi, d, c, b):
    """Effective potential V(phi; d, c) by adaptive Gauss-Kronrod quadrature."""
    _check_domain(phi, c)
    if phi == 0.0:
        return 0.0
    integral, _ = quad(
        lambda s: d * _power(c - s * s, -b / 2.0),
        0.0,
        phi,
        epsabs=QUAD_EPSABS,
        epsrel=1e-13,
        limit=200,
    )
    return integral - 0.5 * phi * phi


def potential_closed_form(phi, d, c, b):
    """Closed-form V for b = 2 and b = 3 (used to audit the quadrature)."""
    _check_domain(phi, c)
    if b == 2:
        return d / math.sqrt(c) * math.atanh(phi / math.sqrt(c)) - 0.5 * phi * phi
    if b == 3:
        return d * phi / (c * math.sqrt(c - phi * phi)) - 0.5 * phi * phi
    raise ValueError("closed form only available for b in {2, 3}")


def equilibrium(params: ModelParams) -> Equilibrium:
    """Constant state w0 and bifurcation speed c0 for wave number k.

    ``c0 = (k^2 + b + 1)/(k^2 + 1) * w0^2``, the value forced jointly by the
    kernel condition and (c0 - w0^2)^(b/2) w0 = d.
    """
    b, k, d = params.b, params.k, params.d
    k2 = k * k
    w0 = math.exp(math.log(d) / (b + 1.0) - b / (2.0 * (b + 1.0)) * math.log(b / (1.0 + k2)))
    w0sq = w0 * w0
    c0 = (k2 + b + 1.0) / (k2 + 1.0) * w0sq
    if not c0 > params.c_min:
        raise BifurcationInvalid(c0, params.c_min)
    return Equilibrium(
        w0=w0,
        c0=c0,
        alpha_tilde=b * w0sq / (1.0 + k2),
        alpha=-b * w0sq * k2 / (1.0 + k2),
    )


def _bisect(f, lo, hi, tol=BISECT_TOL, maxiter=BISECT_MAXITER):
    # f(lo) < 0 < f(hi) is assumed; endpoints are never evaluated
    for _ in range(maxiter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= tol:
            return mid
        if f(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def general_equilibrium(d, c, b):
    """Inflection point phi0 and the local minimum wmin of V for a given speed.

    Returns ``(phi0, wmin)`` with sqrt(c/(b+1)) < phi0 < wmin < sqrt(c).
    """
    for name, value in (("d", d), ("c", c), ("b", b)):
        if not value > 0:
            raise NonPositiveParameter(name, value)
    root_c = math.sqrt(c)
    s = math.sqrt(c / (b + 1.0))
    if not (c > c_min(b, d) and potential_d1(s, d, c, b) < 0.0):
        raise NoMinimum(f"c = {c!r} does not exceed c_min = {c_min(b, d)!r}")
    phi0 = _bisect(lambda p: potential_d2(p, d, c, b), s, root_c)
    wmin = _bisect(lambda p: potential_d1(p, d, c, b), phi0, root_c)
    return phi0, wmin
