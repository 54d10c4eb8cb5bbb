"""Closed-form modulational-instability calculus.

The three critical eigenvalues of the Bloch operator near the origin are
approximated, for small amplitude ``a`` and Bloch frequency ``xi``, by
``i xi lambda`` with ``lambda`` a root of the cubic

    H(lambda) = d3 lambda^3 - d2 lambda^2 - d1 lambda + d0,
    det(B - i xi lambda I_a) = i xi^3 H(lambda),

where ``I_a`` and ``B`` are the 3x3 Gram and operator matrices on the
critical eigenspace. A negative discriminant (complex pair) signals
modulational instability; to leading order its sign is that of the index

    g(k, b) = 6 + 10k^2 + 26k^4 + 22k^6 + b(12 + 8k^2 + 3k^4 - 11k^6)
              + b^2(6 - 2k^2 - 5k^4 + k^6).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .asymptotics import expansion_coeffs
from .errors import DegenerateScaling
from .params import ModelParams, equilibrium

X1 = 2.0 + math.sqrt(10.0)  # positive root of A(x) other than x = 1
B_AT_X1 = 23.0 / 921.0 * (59.0 + 16.0 * math.sqrt(10.0))
B1_LIMIT = (11.0 - math.sqrt(33.0)) / 2.0
B2_LIMIT = (11.0 + math.sqrt(33.0)) / 2.0
MARGINAL_RTOL = 1e-12


class Verdict(str, enum.Enum):
    MODULATIONALLY_UNSTABLE = "ModulationallyUnstable"
    MODULATIONALLY_STABLE = "ModulationallyStable"
    SPECTRALLY_STABLE = "SpectrallyStable"
    MARGINAL = "Marginal"


@dataclass(frozen=True)
class StabilityVerdict:
    g_value: float
    verdict: Verdict
    k_squared: float
    notes: str = ""


@dataclass(frozen=True)
class RegionBoundary:
    x: float
    A: float
    Bq: float
    C: float
    Delta_x: float
    b1: float | None
    b2: float | None
    b1_physical: bool = False
    b2_physical: bool = False


@dataclass(frozen=True)
class ReducedMatrices:
    I_a: np.ndarray
    B: np.ndarray
    alpha: float
    m1: float
    y1: float
    gamma1: float
    gamma2: float


@dataclass(frozen=True)
class CriticalCubic:
    d3: float
    d2: float
    d1: float
    d0: float
    Delta: float
    max_imag: float = 0.0

    def roots(self):
        return np.roots([self.d3, -self.d2, -self.d1, self.d0])


def _horner(coeffs, x):
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


_A = (6.0, -2.0, -5.0, 1.0)
_B = (12.0, 8.0, 3.0, -11.0)
_C = (6.0, 10.0, 26.0, 22.0)


def quadratic_coefficients(x):
    """(A, B, C) with g = A b^2 + B b + C in the variable x = k^2."""
    return _horner(_A, x), _horner(_B, x), _horner(_C, x)


def g_index(k, b):
    x = k * k
    A, B, C = quadratic_coefficients(x)
    return (A * b + B) * b + C


def _g_scale(k, b):
    x = k * k
    absval = lambda cs: _horner([abs(c) for c in cs], x)  # noqa: E731
    return absval(_A) * b * b + absval(_B) * abs(b) + absval(_C)


def verdict_from_g(g, k, b):
    k2 = k * k
    if abs(g) < MARGINAL_RTOL * (1.0 + _g_scale(k, b)):
        return Verdict.MARGINAL
    if g < 0:
        return Verdict.MODULATIONALLY_UNSTABLE
    return Verdict.SPECTRALLY_STABLE if k2 < 3.0 else Verdict.MODULATIONALLY_STABLE


def classify(params: ModelParams) -> StabilityVerdict:
    k, b = params.k, params.b
    g = g_index(k, b)
    verdict = verdict_from_g(g, k, b)
    notes = f"g={g:.17g}; k^2={k * k:.17g}; region case: {lemma52_case(k, b)}"
    return StabilityVerdict(g_value=g, verdict=verdict, k_squared=k * k, notes=notes)


def region_boundary(x) -> RegionBoundary:
    """Roots b1(x), b2(x) of g(x, b) = 0 viewed as a quadratic in b."""
    A, B, C = quadratic_coefficients(x)
    delta = 3.0 * x * x * _horner((-96.0, -120.0, 163.0, 90.0, 11.0), x)
    b1 = b2 = None
    if abs(A) <= 1e-13 * (abs(B) + abs(C)):
        b1 = -C / B
    elif delta >= 0.0:
        root = math.sqrt(delta)
        # pick the cancellation-free form of each root
        b1 = (-B - root) / (2.0 * A) if B >= 0 else 2.0 * C / (-B + root)
        b2 = (-B + root) / (2.0 * A) if B <= 0 else 2.0 * C / (-B - root)
    return RegionBoundary(
        x=x,
        A=A,
        Bq=B,
        C=C,
        Delta_x=delta,
        b1=b1,
        b2=b2,
        b1_physical=b1 is not None and b1 > 0,
        b2_physical=b2 is not None and b2 > 0,
    )


def _quartic(x):
    return _horner((-96.0, -120.0, 163.0, 90.0, 11.0), x)


def threshold_x0(tol=1e-12):
    """Positive root of 11x^4 + 90x^3 + 163x^2 - 120x - 96 by bisection."""
    lo, hi = 0.5, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _quartic(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def lemma52_case(k, b, x_tol=1e-12):
    """Which of the three instability cases of the (k, b) region analysis applies.

    Returns ``"case 1"``, ``"case 2"``, ``"case 3"`` or ``"stable region"``.
    """
    x = k * k
    if abs(x - X1) <= x_tol * X1:
        return "case 3" if b > B_AT_X1 else "stable region"
    if x <= 1.0:
        return "stable region"
    rb = region_boundary(x)
    if x < X1:
        return "case 1" if b > rb.b1 else "stable region"
    return "case 2" if rb.b1 < b < rb.b2 else "stable region"


def boundary_trace(xs):
    """Rows (x, b1, b2) of the zero set of g; missing roots are None."""
    rows = []
    for x in xs:
        rb = region_boundary(float(x))
        rows.append((rb.x, rb.b1, rb.b2))
    return rows


def _aux(params: ModelParams):
    b, k = params.b, params.k
    eq = equilibrium(params)
    e = expansion_coeffs(params, eq)
    w0, alpha, e3 = eq.w0, eq.alpha, e.e3
    k2 = k * k
    m1 = 1.0 / (k2 + 1.0)
    y1 = -2.0 * k2 / (k2 + 1.0) ** 2
    gamma1 = 2.0 * k * alpha * e3 + 2.0 * k * y1 * w0 * (k2 + 1.0 + b) - k * w0 * m1 * (b * k2 + 2.0 + 2.0 * b)
    gamma2 = k * e3 * alpha + k * w0 * (b * k2 - 6.0 * k2 - 2.0 - 2.0 * b) / 2.0
    return eq, e, m1, y1, gamma1, gamma2


def assemble_reduced(params: ModelParams, a: float, xi: float) -> ReducedMatrices:
    """Gram matrix I_a and projected operator B through orders 1, a, a*xi, xi^2."""
    b, k = params.b, params.k
    eq, e, m1, y1, gamma1, gamma2 = _aux(params)
    alpha, w0, e3 = eq.alpha, eq.w0, e.e3
    I_a = np.array([[1.0, 0.0, 2.0 * a * e3], [0.0, 1.0, 0.0], [a * e3, 0.0, 1.0]])
    s = k * alpha * (-3.0 * m1 + 2.0 * y1)
    B = np.zeros((3, 3), dtype=complex)
    B += 1j * xi * np.diag([-2.0 * k * alpha * m1, -2.0 * k * alpha * m1, k * alpha])
    B[1, 2] += a * 2.0 * k * w0 * m1 * (k * k + 1.0 + b)
    B[0, 2] += 1j * a * xi * gamma1
    B[2, 0] += 1j * a * xi * gamma2
    B[0, 1] += xi * xi * s
    B[1, 0] -= xi * xi * s
    return ReducedMatrices(I_a=I_a, B=B, alpha=alpha, m1=m1, y1=y1, gamma1=gamma1, gamma2=gamma2)


CUBIC_DPS = 40  # working digits for the cofactor expansion and discriminant


def _pmul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        for j, y in enumerate(q):
            out[i + j] += x * y
    return out


def _padd(p, q, sign=1):
    n = max(len(p), len(q))
    p = list(p) + [0] * (n - len(p))
    q = list(q) + [0] * (n - len(q))
    return [x + sign * y for x, y in zip(p, q)]


def _det3_poly(M):
    """Cofactor expansion along the first row of a 3x3 matrix of polynomials.

    Entries are coefficient lists in ascending powers.
    """
    def minor(j):
        c0, c1 = [c for c in range(3) if c != j]
        return _padd(_pmul(M[1][c0], M[2][c1]), _pmul(M[1][c1], M[2][c0]), -1)

    total = [0]
    for j in range(3):
        total = _padd(total, _pmul(M[0][j], minor(j)), -1 if j == 1 else 1)
    return total


def discriminant(d3, d2, d1, d0):
    return 18 * d3 * d2 * d1 * d0 + d2**2 * d1**2 + 4 * d2**3 * d0 + 4 * d3 * d1**3 - 27 * d3**2 * d0**2


def critical_cubic(params: ModelParams, a: float, xi: float) -> CriticalCubic:
    """Coefficients of H(lambda) from det(B - i xi lambda I_a) = i xi^3 H(lambda).

    The discriminant of a cubic with a nearly double root cancels
    catastrophically in double precision, so the expansion and the
    discriminant are carried out with ``CUBIC_DPS`` digits from the
    double-precision matrix entries.
    """
    if xi == 0.0:
        raise DegenerateScaling("xi = 0: the characteristic polynomial cannot be divided by xi^3")
    rm = assemble_reduced(params, a, xi)
    with mpmath.workdps(CUBIC_DPS):
        mu = mpmath.mpc(0, xi)
        M = [
            [[mpmath.mpc(rm.B[i, j].real, rm.B[i, j].imag), -mu * mpmath.mpf(rm.I_a[i, j])] for j in range(3)]
            for i in range(3)
        ]
        poly = _det3_poly(M)
        poly = [c / (mpmath.mpc(0, 1) * mpmath.mpf(xi) ** 3) for c in poly] + [0] * (4 - len(poly))
        coeffs = [poly[3], -poly[2], -poly[1], poly[0]]
        max_imag = float(max(abs(mpmath.im(c)) for c in coeffs))
        d3, d2, d1, d0 = (mpmath.re(c) for c in coeffs)
        delta = discriminant(d3, d2, d1, d0)
        return CriticalCubic(float(d3), float(d2), float(d1), float(d0), float(delta), max_imag)


def delta0(params: ModelParams, xi):
    b, k, d = params.b, params.k, params.d
    k2 = k * k
    return (
        4.0 * b ** (6.0 / (1.0 + b)) * d ** (12.0 / (1.0 + b)) * k**18
        * (k2 + 3.0) ** 4 * (7.0 * k2 + 3.0) ** 2 * xi * xi
        / (k2 + 1.0) ** ((14.0 + 8.0 * b) / (1.0 + b))
    )


def lambda_coefficient(params: ModelParams):
    b, k, d = params.b, params.k, params.d
    k2 = k * k
    prefactor = (
        2.0 * b ** ((4.0 - b) / (1.0 + b)) * d ** (10.0 / (1.0 + b)) * k**14
        * (k2 + 3.0) ** 3 * (7.0 * k2 + 3.0)
        / (3.0 * (k2 + 1.0) ** ((11.0 + 6.0 * b) / (1.0 + b)))
    )
    return prefactor * g_index(k, b)


def delta_expansion(params: ModelParams, a: float, xi: float):
    """(Delta(0, xi), Lambda(k, b, d), Delta(0, xi) + Lambda a^2)."""
    D0 = delta0(params, xi)
    lam = lambda_coefficient(params)
    return D0, lam, D0 + lam * a * a
