import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bnovikov.errors import BifurcationInvalid, DomainError, NoMinimum, NonPositiveParameter
from bnovikov.params import (
    ModelParams,
    c_min,
    equilibrium,
    general_equilibrium,
    potential,
    potential_closed_form,
    potential_d1,
    potential_d2,
    validate_params,
)

positive = st.floats(min_value=0.05, max_value=20.0)


def test_validate_params_examples():
    assert validate_params(3, 1, 1).c_min == pytest.approx(4.0 * 3.0**-0.75, rel=1e-15)
    assert validate_params(3, 1, 1).c_min == pytest.approx(1.754765, abs=5e-7)
    assert validate_params(1, 1, 1).c_min == pytest.approx(2.0, rel=1e-15)


@pytest.mark.parametrize("bad", [(-1, 1, 1), (1, 0, 1), (1, 1, -2), (float("nan"), 1, 1), (1, float("inf"), 1)])
def test_non_positive_rejected(bad):
    with pytest.raises(NonPositiveParameter) as info:
        validate_params(*bad)
    assert info.value.name == "bkd"[[i for i, v in enumerate(bad) if not (math.isfinite(v) and v > 0)][0]]


def test_non_positive_names_b():
    with pytest.raises(NonPositiveParameter, match="'b'"):
        validate_params(-1, 1, 1)


def test_potential_at_origin():
    assert potential(0.0, 1.3, 2.0, 2.5) == 0.0


def test_potential_b3_closed_form_zero():
    assert potential_closed_form(1.0, 1.0, 2.0, 3) == pytest.approx(0.0, abs=1e-15)
    assert potential(1.0, 1.0, 2.0, 3) == pytest.approx(0.0, abs=1e-10)


@pytest.mark.parametrize("b", [2, 3])
@pytest.mark.parametrize("frac", [0.1, 0.5, 0.9, 0.99])
def test_quadrature_matches_closed_forms(b, frac):
    c, d = 2.0, 0.7
    phi = frac * math.sqrt(c)
    assert potential(phi, d, c, b) == pytest.approx(potential_closed_form(phi, d, c, b), abs=1e-10, rel=1e-10)


def test_potential_blows_up_near_sqrt_c():
    c, d, b = 2.0, 1.0, 3.0
    r = math.sqrt(c)
    vals = [potential(f * r, d, c, b) for f in (0.99, 0.999, 0.9999, 0.99999)]
    assert all(x < y for x, y in zip(vals, vals[1:]))
    assert vals[-1] > 100.0


@pytest.mark.xfail(strict=True, reason="stated chain is false: V(0.9 sqrt c) = 0.2224 < 100 |V(0.5 sqrt c)| = 3.87; see ledger")
def test_potential_chain_as_stated():
    c, d, b = 2.0, 1.0, 3.0
    r = math.sqrt(c)
    assert potential(0.999 * r, d, c, b) > potential(0.9 * r, d, c, b) > 100.0 * abs(potential(0.5 * r, d, c, b))


def test_domain_errors():
    for fn in (potential, potential_d1, potential_d2):
        with pytest.raises(DomainError):
            fn(1.5, 1.0, 2.0, 3.0)
        with pytest.raises(DomainError):
            fn(-math.sqrt(2.0), 1.0, 2.0, 3.0)


@given(b=positive, frac=st.floats(min_value=-0.95, max_value=0.95))
@settings(max_examples=40, deadline=None)
def test_derivatives_match_finite_differences(b, frac):
    c, d = 2.0, 0.8
    phi = frac * math.sqrt(c)
    h = 1e-5
    fd1 = (potential(phi + h, d, c, b) - potential(phi - h, d, c, b)) / (2 * h)
    fd2 = (potential_d1(phi + h, d, c, b) - potential_d1(phi - h, d, c, b)) / (2 * h)
    assert fd1 == pytest.approx(potential_d1(phi, d, c, b), rel=1e-6, abs=1e-6)
    assert fd2 == pytest.approx(potential_d2(phi, d, c, b), rel=1e-6, abs=1e-6)


@given(b=positive, k=st.floats(min_value=0.05, max_value=10.0), d=st.floats(min_value=0.05, max_value=10.0))
@settings(max_examples=100, deadline=None)
def test_equilibrium_invariants(b, k, d):
    eq = equilibrium(ModelParams(b, k, d))
    assert eq.w0 * eq.w0 < eq.c0
    assert (eq.c0 - eq.w0**2) ** (b / 2) * eq.w0 == pytest.approx(d, rel=1e-12)
    assert eq.alpha_tilde == pytest.approx(eq.c0 - eq.w0**2, rel=1e-12)
    assert eq.alpha == pytest.approx(eq.c0 - (1 + b) * eq.w0**2, rel=1e-9, abs=1e-12 * eq.c0)
    assert eq.alpha_tilde > 0 > eq.alpha
    # kernel condition: cos z solves the profile equation linearised at (w0, c0)
    s = eq.c0 - eq.w0**2
    lin = (1 + k * k) * s ** (b / 2) - eq.w0 * b * eq.w0 * s ** (b / 2 - 1)
    assert abs(lin) <= 1e-10 * (1 + k * k) * s ** (b / 2)


def test_equilibrium_reference_values():
    eq = equilibrium(ModelParams(3, 1, 1))
    # w0 = 1.5^(-3/8), c0 = 2.5 * 1.5^(-3/4)
    assert eq.w0 == pytest.approx(1.5**-0.375, rel=1e-14)
    assert eq.c0 == pytest.approx(2.5 * 1.5**-0.75, rel=1e-14)
    assert eq.w0 == pytest.approx(0.8589458344196571, rel=1e-14)
    assert eq.c0 == pytest.approx(1.8444698661672023, rel=1e-14)


def test_bifurcation_speed_above_threshold_and_limit():
    # c0 >= c_min with equality only in the long-wave limit; the gap closes like k^4
    for k in (0.05, 0.1, 1.0, 10.0):
        p = ModelParams(2.5, k, 1.0)
        assert equilibrium(p).c0 > p.c_min
    gaps = [equilibrium(ModelParams(2.5, k, 1.0)).c0 / c_min(2.5, 1.0) - 1.0 for k in (0.1, 0.05)]
    assert gaps[0] / gaps[1] == pytest.approx(16.0, rel=0.02)


def test_degenerate_bifurcation_at_tiny_k():
    # c0 - c_min = O(k^4) falls below roundoff
    with pytest.raises(BifurcationInvalid):
        equilibrium(ModelParams(2.5, 1e-4, 1.0))


def test_bifurcation_invalid_message():
    err = BifurcationInvalid(1.0, 2.0)
    assert err.c0 == 1.0 and "c_min" in str(err)


def test_general_equilibrium_recovers_w0():
    p = ModelParams(3, 1, 1)
    eq = equilibrium(p)
    phi0, wmin = general_equilibrium(1.0, eq.c0, 3.0)
    assert wmin == pytest.approx(eq.w0, abs=1e-11)
    assert math.sqrt(eq.c0 / 4) < phi0 < wmin < math.sqrt(eq.c0)
    assert abs(potential_d2(phi0, 1.0, eq.c0, 3.0)) < 1e-9
    assert potential_d2(wmin, 1.0, eq.c0, 3.0) > 0


@given(b=st.floats(0.2, 8.0), d=st.floats(0.2, 4.0), excess=st.floats(1.01, 4.0))
@settings(max_examples=50, deadline=None)
def test_general_equilibrium_is_a_minimum(b, d, excess):
    c = excess * c_min(b, d)
    phi0, wmin = general_equilibrium(d, c, b)
    assert abs(potential_d1(wmin, d, c, b)) < 1e-8 * (1 + d)
    assert potential_d2(wmin, d, c, b) >= -1e-9


def test_no_minimum_below_threshold():
    with pytest.raises(NoMinimum):
        general_equilibrium(1.0, 0.9 * c_min(3.0, 1.0), 3.0)
    with pytest.raises(NonPositiveParameter):
        general_equilibrium(1.0, -1.0, 3.0)


def test_params_frozen():
    p = ModelParams(3, 1, 1)
    with pytest.raises(Exception):
        p.b = 2.0
    assert np.isfinite(p.c_min) and p.c_min > 0
