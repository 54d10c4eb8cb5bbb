import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bnovikov.asymptotics import (
    basis_functions,
    expansion_coeffs,
    expansion_residual,
    family_point,
    speed_expansion,
    wave_expansion,
    wave_expansion_zz,
)
from bnovikov.errors import AmplitudeTooLarge
from bnovikov.params import ModelParams, equilibrium
from bnovikov.wave import newton_refine

AMPS = (0.0025, 0.005, 0.01, 0.02)


def test_reference_coefficients():
    e = expansion_coeffs(ModelParams(3, 1, 1))
    # c2 is rational for (3,1,1): 250/144
    assert e.c2 == pytest.approx(250.0 / 144.0, rel=1e-15)
    assert e.e1 == pytest.approx(-0.5012604267956645, rel=1e-13)
    assert e.e2 == pytest.approx(0.8408239417217599, rel=1e-13)
    eq = equilibrium(ModelParams(3, 1, 1))
    assert e.e3 == pytest.approx(2 * e.e1 - e.c2 / eq.c0 * eq.w0, rel=1e-15)


@pytest.mark.parametrize("params", [(3, 1, 1), (2, 1.5, 1), (5, 0.8, 1), (0.5, 0.9, 2.0)])
def test_residual_is_third_order(params):
    p = ModelParams(*params)
    R = [expansion_residual(family_point(p, a)) for a in AMPS]
    ratios = [R[i + 1] / R[i] for i in range(3)]
    assert all(6.0 <= r <= 10.0 for r in ratios), ratios
    assert max(r / a**3 for r, a in zip(R, AMPS)) < 10 * min(r / a**3 for r, a in zip(R, AMPS))


@pytest.mark.parametrize("params", [(3, 1, 1), (2, 1.5, 1), (5, 0.8, 1), (0.5, 0.9, 2.0)])
def test_coefficients_against_refined_waves(params):
    # (coefficient(a) - expansion)/a^2 must vanish like a^2
    p = ModelParams(*params)
    eq = equilibrium(p)
    e = expansion_coeffs(p, eq)
    errs = []
    for a in (0.01, 0.005):
        w = newton_refine(p, a)
        errs.append(np.array([(w.coeffs[0] - eq.w0) / a**2 - e.e1, w.coeffs[2] / a**2 - e.e2, (w.c - eq.c0) / a**2 - e.c2]))
    assert np.all(np.abs(errs[1]) < 0.01)
    ratio = np.abs(errs[0]) / np.abs(errs[1])
    assert np.all((ratio > 3.0) & (ratio < 5.0)), ratio


def test_wave_expansion_values():
    pt = family_point(ModelParams(3, 1, 1), 0.1)
    e, eq = pt.coeffs, pt.eq
    assert wave_expansion(pt, 0.0) == pytest.approx(eq.w0 + 0.1 + 0.01 * (e.e1 + e.e2), rel=1e-15)
    assert wave_expansion(pt, np.pi) == pytest.approx(eq.w0 - 0.1 + 0.01 * (e.e1 + e.e2), rel=1e-15)
    assert speed_expansion(pt) == pytest.approx(eq.c0 + 0.01 * 250.0 / 144.0, rel=1e-15)
    assert speed_expansion(pt) == pytest.approx(1.8618309772783134, rel=1e-14)
    z = np.linspace(0, 2 * np.pi, 7)
    assert wave_expansion(pt, z).shape == (7,)


def test_second_derivative_matches_finite_difference():
    pt = family_point(ModelParams(2, 1.5, 1), 0.08)
    z = np.linspace(0.1, 6.0, 11)
    h = 1e-4
    fd = (wave_expansion(pt, z + h) - 2 * wave_expansion(pt, z) + wave_expansion(pt, z - h)) / h**2
    assert np.allclose(fd, wave_expansion_zz(pt, z), atol=1e-6)


def test_amplitude_soft_cap_warns():
    pt = family_point(ModelParams(3, 1, 1), 0.25)
    with pytest.warns(AmplitudeTooLarge):
        wave_expansion(pt, 0.3)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        wave_expansion(family_point(ModelParams(3, 1, 1), 0.2), 0.3)


def test_basis_at_zero_amplitude():
    pt = family_point(ModelParams(3, 2, 1), 0.0)
    z = np.linspace(0, 2 * np.pi, 9)
    p1, p2, p3 = basis_functions(pt, z)
    assert np.allclose(p1, np.cos(z)) and np.allclose(p2, np.sin(z)) and np.allclose(p3, 1.0)
    assert basis_functions(pt, 0.0) == (1.0, 0.0, 1.0)


def test_basis_first_order_terms():
    pt = family_point(ModelParams(3, 2, 1), 0.01)
    e = pt.coeffs
    p1, p2, _ = basis_functions(pt, 0.0)
    assert p1 == pytest.approx(1 + 0.01 * (e.e3 + 2 * e.e2), rel=1e-15)
    # phi2 is the z-derivative direction of the wave: -w_z / a to first order
    z = np.linspace(0.2, 3.0, 5)
    wz = -0.01 * np.sin(z) - 2 * 0.01**2 * e.e2 * np.sin(2 * z)
    assert np.allclose(basis_functions(pt, z)[1], -wz / 0.01, rtol=1e-14)


@given(b=st.floats(0.2, 10), k=st.floats(0.2, 4), d=st.floats(0.3, 3), a=st.floats(-0.05, 0.05))
@settings(max_examples=40, deadline=None)
def test_even_in_amplitude(b, k, d, a):
    # w(z; -a) = w(z + pi; a) and c(-a) = c(a)
    p = ModelParams(b, k, d)
    z = np.linspace(0, 2 * np.pi, 5)
    assert np.allclose(wave_expansion(family_point(p, -a), z), wave_expansion(family_point(p, a), z + np.pi), rtol=1e-13)
    assert speed_expansion(family_point(p, -a)) == speed_expansion(family_point(p, a))
