import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from highquant.approx import (
    PenultimateApprox,
    a_gw,
    a_loggw,
    anchor,
    approx_eval,
    g_gw,
    g_loggw,
    nu,
    prob_error,
    spacing_slope,
    survival_form,
)
from highquant.core import h
from highquant.errors import DegenerateSpacing, DomainError
from highquant.models import make_model


@pytest.mark.parametrize("y", [0.5, 3.0, 17.0])
def test_functionals_on_exact_families(y):
    assert a_gw(make_model("exact_weibull(0.5)"), 2.0, y) == pytest.approx(0.5, abs=1e-13)
    assert a_gw(make_model("exact_gw(1,2,-1)"), 2.0, y) == pytest.approx(-1.0, abs=1e-12)
    assert a_loggw(make_model("exact_loggw(1,0.5)"), 2.0, y) == pytest.approx(0.5, abs=1e-13)
    assert g_gw(make_model("exact_weibull(1)"), 2.0, y) == pytest.approx(y, rel=1e-14)


def test_g_gw_exact_gw_scale():
    # q(y) = 1 + 2 h(-1, y): (q(2y) - q(y)) / h(-1, 2) = 2 y**-1
    assert g_gw(make_model("exact_gw(1,2,-1)"), 2.0, 5.0) == pytest.approx(2 / 5, rel=1e-12)


def test_g_loggw_exact_loggw_scale():
    # log q(y) = h(0.5, y): g = y**0.5
    assert g_loggw(make_model("exact_loggw(1,0.5)"), 2.0, 4.0) == pytest.approx(2.0, rel=1e-12)


def test_functionals_on_reference_models():
    assert abs(a_gw(make_model("normal"), 2.0, 20.0) - 0.5) < 0.15
    assert abs(a_loggw(make_model("lognormal"), 2.0, 20.0) - 0.5) < 0.15
    assert abs(a_loggw(make_model("pareto_like"), 2.0, 30.0) - 1.0) < 0.2
    g = g_gw(make_model("normal"), 2.0, 20.0)
    assert 0 < g < math.inf
    assert g_loggw(make_model("lognormal"), 2.0, 10.0) > 0
    assert g_loggw(make_model("pareto_like"), 2.0, 10.0) > 0


@pytest.mark.parametrize("family", ["GW", "logGW"])
@pytest.mark.parametrize("name", ["normal", "lognormal", "burr", "pareto_like", "slowvar_exp", "exact_weibull(2)"])
def test_approximation_is_exact_at_anchor_points(name, family):
    m = make_model(name)
    y = 6.0
    a = anchor(m, family, 2.0, y)
    assert approx_eval(a, y) == a.base_q == m.q(y)
    assert nu(m, a, y) == 0.0
    # by construction the approximation also interpolates q(y*iota)
    assert approx_eval(a, 2 * y) == pytest.approx(m.q(2 * y), rel=1e-12)


EXACT_CASES = [
    ("exact_gw(1,2,-1)", "GW"),
    ("exact_gw(0.5,1,0)", "GW"),
    ("exact_gw(3,1,0.5)", "GW"),
    ("exact_gw(0,1,2)", "GW"),
    ("exact_weibull(0.5)", "GW"),
    ("exact_loggw(1,0.5)", "logGW"),
    ("exact_loggw(0.2,-0.5)", "logGW"),
    ("exact_loggw(2,0)", "logGW"),
]


@pytest.mark.parametrize("name, family", EXACT_CASES)
def test_exact_families_are_reproduced(name, family):
    m = make_model(name)
    for y in (1.0, 4.0, 10.0):
        a = anchor(m, family, 2.0, y)
        for z in np.linspace(y, 8 * y, 15):
            assert approx_eval(a, z) == pytest.approx(m.q(z), rel=1e-12)
            assert abs(nu(m, a, z)) <= 1e-10


def test_log_index_zero_identity_grid():
    # log-GW with index 0 is a GW approximation with index g and scale g*q
    rng = np.random.default_rng(7)
    for _ in range(100):
        y = rng.uniform(0.5, 30)
        z = y * rng.uniform(0.2, 20)
        g = rng.uniform(0.05, 3)
        base = rng.uniform(0.1, 50)
        lg = PenultimateApprox("logGW", y, 0.0, g, base)
        gw = PenultimateApprox("GW", y, g, g * base, base)
        assert lg(z) == pytest.approx(gw(z), rel=1e-12)


def test_penultimate_validation():
    with pytest.raises(DomainError):
        PenultimateApprox("GW", 1.0, 0.5, 0.0, 1.0)
    with pytest.raises(DomainError):
        PenultimateApprox("GW", 0.0, 0.5, 1.0, 1.0)
    with pytest.raises(DomainError):
        PenultimateApprox("logGW", 1.0, 0.5, 1.0, -1.0)
    with pytest.raises(ValueError):
        PenultimateApprox("GP", 1.0, 0.5, 1.0, 1.0)
    with pytest.raises(DomainError):
        approx_eval(PenultimateApprox("GW", 1.0, 0.5, 1.0, 1.0), 0.0)


def test_spacing_slope_degenerate():
    with pytest.raises(DegenerateSpacing):
        spacing_slope(1.0, 1.0, 2.0, 2.0)
    with pytest.raises(DegenerateSpacing):
        spacing_slope(1.0, 2.0, 2.0, 2.0)
    assert spacing_slope(0.0, 1.0, 3.0, 3.0) == pytest.approx(math.log(2) / math.log(3))


def test_normal_nu_against_independent_chain():
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.dps = 40
    y = 3 * math.log(2)
    z = 2 * math.log(2**16)

    def surv(x):
        return mpmath.erfc(x / mpmath.sqrt(2)) / 2

    def q(t):
        return mpmath.findroot(lambda x: -mpmath.log(surv(x)) - t, 2.0)

    q0, q1, q2 = q(y), q(2 * y), q(4 * y)
    rho = mpmath.log((q2 - q1) / (q1 - q0)) / mpmath.log(2)
    g = (q1 - q0) / ((mpmath.power(2, rho) - 1) / rho)
    approx = q0 + g * (mpmath.power(z / y, rho) - 1) / rho
    oracle = float(-mpmath.log(surv(approx)) / z - 1)

    m = make_model("normal")
    got = nu(m, anchor(m, "GW", 2.0, y), z)
    assert got == pytest.approx(oracle, abs=1e-6)
    assert got == pytest.approx(-0.0216316783517726, abs=1e-9)


def test_prob_error_conventions():
    m = make_model("exact_gw(1,2,-1)")  # support (-inf, 3)
    assert prob_error(m, 3.5, 2.0) == math.inf
    ln = make_model("lognormal")
    assert prob_error(ln, -1.0, 2.0) == -1.0
    assert prob_error(ln, ln.q(5.0), 5.0) == pytest.approx(0.0, abs=1e-14)
    assert math.isnan(prob_error(ln, math.nan, 5.0))


def test_survival_form_at_zero_is_exp_minus_one():
    for name in ("normal", "lognormal", "burr", "exact_weibull(0.5)"):
        m = make_model(name)
        for y in (1.0, 5.0, 20.0):
            lhs, rhs = survival_form(m, 0.3, 2.0, y, 0.0)
            assert lhs == pytest.approx(math.exp(-1), rel=1e-12)
            assert rhs == pytest.approx(math.exp(-1), rel=1e-15)


@pytest.mark.parametrize("theta", [0.25, 0.5, 1.0, 2.0, 3.0])
def test_survival_form_weibull(theta):
    m = make_model(f"exact_weibull({theta})")
    for y in (1.0, 5.0, 20.0):
        for x in np.linspace(-1 / theta + 0.05, 10, 25):
            lhs, rhs = survival_form(m, theta, theta * m.q(y), y, x)
            assert lhs == pytest.approx(rhs, rel=1e-10)
        # Weibull form without the location shift
        for x in (0.1, 1.0, 4.0):
            surv = math.exp(-m.q_inv(x * m.q(y)))
            assert surv ** (1 / y) == pytest.approx(math.exp(-(x ** (1 / theta))), rel=1e-12)


def test_survival_form_below_support():
    m = make_model("exact_weibull(0.5)")
    with pytest.raises(DomainError):
        survival_form(m, 0.5, 0.5 * m.q(4.0), 4.0, -3.0)


def test_finite_endpoint_sup_error_shrinks():
    # U in ERV with a negative index: q has a finite right endpoint
    m = make_model("exact_gp(2,1,-0.25)")

    def sup_err(y):
        a = anchor(m, "GW", 2.0, y)
        return max(abs(approx_eval(a, z) - m.q(z)) for z in np.linspace(y, 100 * y, 2000))

    assert sup_err(40.0) < sup_err(10.0)


@pytest.mark.parametrize(
    "name, func, target",
    [
        ("normal", a_gw, 0.5),
        ("lognormal", a_loggw, 0.5),
        ("pareto_like", a_loggw, 1.0),
        ("burr", a_loggw, 1.0),
        ("slowvar_exp", a_loggw, 1.0),
    ],
)
def test_penultimate_index_approaches_limit(name, func, target):
    m = make_model(name)
    dev = [abs(func(m, 2.0, y) - target) for y in (10.0, 20.0, 40.0)]
    assert dev[0] > dev[1] > dev[2]


@settings(max_examples=200, deadline=None)
@given(
    st.floats(-2, 2),
    st.floats(0.1, 5),
    st.floats(0.5, 20),
    st.floats(0.05, 10),
)
def test_gw_approximation_monotone_in_z(rho, g, y, ratio):
    a = PenultimateApprox("GW", y, rho, g, 1.0)
    z1, z2 = y * ratio, y * ratio * 1.5
    assert a(z1) < a(z2) or a(z1) == pytest.approx(a(z2), rel=1e-12)
    assert a(y) == 1.0
    assert a(z1) == pytest.approx(1.0 + g * h(rho, ratio), rel=1e-12)
