"""Floquet-Fourier-Hill discretisation of the Bloch operators.

The linearisation about a wave w with speed c is

    lambda v = k (1 - k^2 D^2)^{-1} L[w] v,
    L[w] = c D - c k^2 D^3 - 2(1+b) w w_z - (1+b) w^2 D
           + b k^2 (w_z w_zz + w w_zz D + w w_z D^2) + k^2 (w^2 D^3 + 2 w w_zzz),

and the Bloch operator P_xi replaces D by (D + i xi) on 2pi-periodic functions.
In the basis exp(i n z), |n| <= N, D + i xi is diagonal with entries i(n + xi)
and every multiplication becomes a Toeplitz matrix of Fourier coefficients.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.linalg import toeplitz
from scipy.optimize import linear_sum_assignment

from .errors import EigensolverFailure, TruncationTooSmall
from .params import Equilibrium
from .wave import FourierWave, evaluate

DEFAULT_N = 48
EIG_BACKWARD_TOL = 1e-10


def omega(n, xi, eq: Equilibrium, k):
    """Unperturbed frequency: P_xi[w0] exp(inz) = i*omega * exp(inz)."""
    q = n + xi
    return q * (q * q - 1.0) * k**3 * eq.alpha_tilde / (1.0 + k * k * q * q)


@dataclass(frozen=True)
class CollisionReport:
    xi: float
    gap_m2_0: float  # omega(-2) - omega(0)
    gap_m1_p1: float  # omega(-1) - omega(1)
    ordering_ok: bool


def collision_report(xi, eq: Equilibrium, k) -> CollisionReport:
    if not 0.0 <= xi <= 0.5:
        raise ValueError(f"xi must lie in [0, 1/2] (got {xi})")
    k2 = k * k
    k3a = k**3 * eq.alpha_tilde
    gap_m2_0 = -2.0 * k3a * (xi - 1.0) ** 2 * (3.0 - 2.0 * k2 * xi + k2 * xi * xi) / (
        (k2 * (xi - 2.0) ** 2 + 1.0) * (k2 * xi * xi + 1.0)
    )
    gap_m1_p1 = -2.0 * k3a * xi * xi * (3.0 - k2 + k2 * xi * xi) / (
        (k2 * (xi - 1.0) ** 2 + 1.0) * (k2 * (xi + 1.0) ** 2 + 1.0)
    )
    chain = [omega(n, xi, eq, k) for n in (-3, -2, 0)] + [0.0] + [omega(n, xi, eq, k) for n in (-1, 1, 2)]
    ordering_ok = bool(xi > 0.0 and all(x < y for x, y in zip(chain, chain[1:])))
    return CollisionReport(xi, gap_m2_0, gap_m1_p1, ordering_ok)


def _fourier_coefficients(values, max_mode):
    """Complex Fourier coefficients f_m, m = -max_mode..max_mode, of grid samples."""
    M = values.size
    fhat = np.fft.fft(values) / M
    m = np.arange(-max_mode, max_mode + 1)
    return fhat[m % M]


def _toeplitz(fhat, N):
    # T[i, j] = f_{n_i - n_j}; fhat is indexed from -2N
    center = 2 * N
    col = fhat[center : center + 2 * N + 1]  # f_0 .. f_{2N}
    row = fhat[center::-1][: 2 * N + 1]  # f_0, f_{-1}, .., f_{-2N}
    return toeplitz(col, row)


def multiplier_coefficients(wave: FourierWave, N: int):
    """Fourier series of the variable coefficients of L, grouped by derivative order.

    Products are formed on a padded grid of 4N+2 points, which resolves every
    mode up to 2N of products of series band-limited to N.
    """
    b, k2 = wave.params.b, wave.params.k ** 2
    M = 4 * N + 2
    z = 2.0 * np.pi * np.arange(M) / M
    w = wave(z)
    wz, wzz, wzzz = (wave(z, j) for j in (1, 2, 3))
    order0 = -2.0 * (1.0 + b) * w * wz + b * k2 * wz * wzz + 2.0 * k2 * w * wzzz
    order1 = wave.c - (1.0 + b) * w * w + b * k2 * w * wzz
    order2 = b * k2 * w * wz
    order3 = -wave.c * k2 + k2 * w * w
    return [_fourier_coefficients(f, 2 * N) for f in (order0, order1, order2, order3)]


def assemble_bloch_matrix(wave: FourierWave, xi: float, N: int = DEFAULT_N):
    """Hill matrix of P_xi[w] on modes -N..N, shape (2N+1, 2N+1)."""
    if N < wave.N:
        raise TruncationTooSmall(f"Hill truncation N={N} is below the wave truncation {wave.N}")
    k = wave.params.k
    q = np.arange(-N, N + 1) + xi
    D = 1j * q
    L = np.zeros((2 * N + 1, 2 * N + 1), dtype=complex)
    for order, fhat in enumerate(multiplier_coefficients(wave, N)):
        L += _toeplitz(fhat, N) * (D**order)[None, :]
    return (k / (1.0 + k * k * q * q))[:, None] * L


@dataclass(frozen=True)
class BlochSample:
    xi: float
    N: int
    eigenvalues: np.ndarray
    max_real_part: float
    critical_triple: tuple
    backward_error: float = 0.0

    def to_dict(self):
        return {
            "schema": 1,
            "xi": self.xi,
            "N": self.N,
            "max_real_part": self.max_real_part,
            "eigenvalues": [[float(z.real), float(z.imag)] for z in self.eigenvalues],
            "critical_triple": [[float(z.real), float(z.imag)] for z in self.critical_triple],
            "backward_error": self.backward_error,
        }


def critical_triple(eigenvalues):
    """Three eigenvalues of smallest modulus, ordered by imaginary part."""
    ev = np.asarray(eigenvalues)
    idx = np.lexsort((ev.imag, np.abs(ev)))[:3]
    trio = ev[idx]
    return tuple(trio[np.argsort(trio.imag, kind="stable")])


def eigs_of_matrix(P, xi, N) -> BlochSample:
    if not np.all(np.isfinite(P)):
        raise EigensolverFailure("matrix contains non-finite entries")
    try:
        lam, vec = np.linalg.eig(P)
    except np.linalg.LinAlgError as exc:
        raise EigensolverFailure(str(exc)) from exc
    norm_P = np.linalg.norm(P, 2)
    vec = vec / np.linalg.norm(vec, axis=0)
    backward = float(np.max(np.linalg.norm(P @ vec - vec * lam, axis=0))) / max(norm_P, 1e-300)
    if not backward <= EIG_BACKWARD_TOL:
        raise EigensolverFailure(f"relative eigenpair residual {backward:.2e} exceeds {EIG_BACKWARD_TOL}")
    order = np.lexsort((lam.real, lam.imag))
    lam = lam[order]
    return BlochSample(
        xi=float(xi),
        N=N,
        eigenvalues=lam,
        max_real_part=float(np.max(lam.real)),
        critical_triple=critical_triple(lam),
        backward_error=backward,
    )


def bloch_eigs(wave: FourierWave, xi: float, N: int = DEFAULT_N) -> BlochSample:
    return eigs_of_matrix(assemble_bloch_matrix(wave, xi, N), xi, N)


def spectrum_symmetry_check(sample, tol: float) -> bool:
    """True iff the eigenvalue multiset is invariant under lambda -> -conj(lambda)."""
    ev = np.asarray(sample.eigenvalues if hasattr(sample, "eigenvalues") else sample)
    mirrored = -np.conj(ev)
    scale = max(1.0, float(np.max(np.abs(ev)))) if ev.size else 1.0
    cost = np.abs(ev[:, None] - mirrored[None, :])
    rows, cols = linear_sum_assignment(cost)
    return bool(np.max(cost[rows, cols]) <= tol * scale) if ev.size else True


def worker_count():
    raw = os.environ.get("BNOV_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return min(8, os.cpu_count() or 1)


def xi_sweep(wave: FourierWave, xis, N: int = DEFAULT_N, workers=None):
    """Bloch samples for each xi, returned in input order."""
    xis = [float(x) for x in xis]
    workers = workers or worker_count()
    if workers <= 1 or len(xis) <= 1:
        return [bloch_eigs(wave, x, N) for x in xis]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda x: bloch_eigs(wave, x, N), xis))


def constant_wave(params, eq: Equilibrium, N: int = 8) -> FourierWave:
    coeffs = np.zeros(N + 1)
    coeffs[0] = eq.w0
    return FourierWave(params, 0.0, N, coeffs, eq.c0, 0.0)


def fourier_vector(coeffs, N, deriv=0):
    """exp(inz) coefficients, |n| <= N, of the ``deriv``-th derivative of a cosine series."""
    coeffs = np.asarray(coeffs, dtype=float)
    out = np.zeros(2 * N + 1, dtype=complex)
    n = np.arange(-N, N + 1)
    idx = np.abs(n)
    mask = idx < coeffs.size
    half = np.where(idx == 0, 1.0, 0.5)
    out[mask] = coeffs[idx[mask]] * half[mask] * (1j * n[mask]) ** deriv
    return out

