import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from fluxdelay import ode
from fluxdelay._special import sech3_sinh
from fluxdelay.errors import DomainError, NoCrossingError, RangeError
from fluxdelay.ode import KinkState, PerturbationSpec


def test_free_rhs():
    for u, X in ((0.3, 1.0), (-0.7, -4.0), (0.0, 0.0)):
        assert ode.rhs(KinkState(u, X), PerturbationSpec()) == (0.0, u)


def test_coupling_vanishes_on_top_of_qubit():
    du, _ = ode.rhs(KinkState(0.01, 0.0), PerturbationSpec(eta=2.9e-3))
    assert du == 0.0


def test_approach_accelerates():
    eta, u = 2.9e-3, 0.01
    du, _ = ode.rhs(KinkState(u, -1.0), PerturbationSpec(eta=eta))
    theta = -1.0 / math.sqrt(1 - u * u)
    expected = -0.5 * eta * u * u * math.sinh(theta) / math.cosh(theta) ** 3
    assert du > 0
    assert du == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("x", [10.0, 100.0, 700.0, -10.0, -100.0, -700.0])
def test_sech3_sinh_far_tail(x):
    mpmath.mp.dps = 50
    ref = mpmath.sinh(x) / mpmath.cosh(x) ** 3
    got = sech3_sinh(x)
    assert math.isfinite(got)
    if abs(ref) < 1e-300:
        assert abs(got) < 1e-300
    else:
        assert got == pytest.approx(float(ref), rel=1e-12)


def test_free_translation_exact():
    tr = ode.integrate(KinkState(0.3, 0.0), PerturbationSpec(), dtau=0.01, tau_end=50.0)
    assert tr.tau[-1] == 50.0
    assert np.max(np.abs(tr.Xi - 0.3 * tr.tau)) < 1e-10


def test_relaxes_to_steady_state():
    tr = ode.integrate(KinkState(0.01, 0.0), PerturbationSpec(alpha=0.1, gamma=-0.1), dtau=0.05, tau_end=400.0)
    assert tr.final.u == pytest.approx(0.6177, abs=1e-3)
    assert tr.final.u == pytest.approx(ode.steady_state_velocity(-0.1, 0.1), abs=1e-9)


def test_light_cone_guard():
    # a valid state already past the numerical light-cone margin
    with pytest.raises(RangeError):
        ode.integrate(KinkState(1 - 5e-13, 0.0), PerturbationSpec(gamma=-0.9), dtau=0.1, tau_end=1.0)
    with pytest.raises(RangeError):
        ode.integrate(KinkState(-(1 - 5e-13), 0.0), PerturbationSpec(gamma=0.9), dtau=0.1, tau_end=1.0)


def test_step_bound():
    with pytest.raises(DomainError):
        ode.integrate(KinkState(0.1, 0.0), PerturbationSpec(), dtau=0.2)


def test_reproducible():
    p = PerturbationSpec(alpha=1e-4, eta=2.9e-3)
    a = ode.integrate(KinkState(0.02, -10), p, tau_end=300)
    b = ode.integrate(KinkState(0.02, -10), p, tau_end=300)
    assert np.array_equal(a.Xi, b.Xi) and np.array_equal(a.u, b.u)


def test_steady_state_formula():
    assert ode.steady_state_velocity(0.0, 0.3) == 0.0
    assert ode.steady_state_velocity(-0.1, 0.1) == pytest.approx(1 / math.sqrt(1 + (4 / math.pi) ** 2), rel=1e-14)
    # 1 - u = (1/2)(4 alpha/(pi gamma))^2 to leading order
    assert 1 - ode.steady_state_velocity(-0.1, 1e-6) == pytest.approx(8.1e-11, rel=0.01)
    assert ode.steady_state_velocity(0.1, 0.1) < 0
    with pytest.raises(DomainError):
        ode.steady_state_velocity(-0.1, 0.0)


def test_analytic_velocity():
    assert ode.analytic_velocity(0.01, 0.0, 0.3) == 0.01
    assert ode.analytic_velocity(0.01, 2.9e-3, 800.0) == 0.01
    assert ode.analytic_velocity(-0.01, 2.9e-3, 0.0) < 0
    u0, eta = 0.01, 2.9e-3
    expansion = u0 * (1 + 0.25 * eta * math.sqrt(1 - u0 * u0))
    assert ode.analytic_velocity(u0, eta, 0.0) == pytest.approx(expansion, abs=u0 * eta**2 * 10)


def test_analytic_velocity_matches_integration():
    u0, eta = 0.05, 2.9e-3
    tr = ode.integrate_to(KinkState(u0, -10.0), PerturbationSpec(eta=eta), 0.0, dtau=0.01)
    assert tr.u[-1] == pytest.approx(ode.analytic_velocity(u0, eta, tr.Xi[-1] / math.sqrt(1 - tr.u[-1] ** 2)), rel=1e-5)


def test_delay_fig3_point(d):
    m = ode.measure_delay(0.01, PerturbationSpec(alpha=1e-6, eta=d.eta_c), PerturbationSpec(alpha=1e-6, eta=-d.eta_c))
    assert m.tau_d == pytest.approx(0.29, rel=0.05)
    assert m.tau_d / d.omega_p == pytest.approx(0.81e-12, rel=0.05)
    assert m.regime_ok


def test_no_coupling_no_delay():
    m = ode.measure_delay(0.05, PerturbationSpec(alpha=1e-5), PerturbationSpec(alpha=1e-5))
    assert float(m) == 0.0
    assert not m.regime_ok


def test_strong_damping_breaks_formula(d):
    analytic = d.eta_c * (1 - 0.005**2) / 0.005
    try:
        got = ode.measure_delay(0.005, PerturbationSpec(alpha=1e-3, eta=d.eta_c), PerturbationSpec(alpha=1e-3, eta=-d.eta_c)).tau_d
    except NoCrossingError:
        got = math.inf
    assert abs(got / analytic - 1) > 0.1


def test_regime_flag(d):
    m = ode.measure_delay(0.02, PerturbationSpec(alpha=1e-4, eta=d.eta_c), PerturbationSpec(alpha=1e-4, eta=-d.eta_c), dtau=0.1)
    assert not m.regime_ok


@pytest.mark.parametrize("u0", [0.01, 0.05, 0.3])
def test_reversal_symmetry(u0, d):
    eta = d.eta_c

    def t(e):
        return ode.integrate_to(KinkState(u0, -10.0), PerturbationSpec(eta=e), 10.0).crossing_time(10.0)

    t0 = t(0.0)
    up, down = t(eta) - t0, t(-eta) - t0
    assert abs(up + down) <= 2 * eta**2 * t0
    assert abs(up + down) <= eta * abs(up)


def test_crossing_time_interpolation():
    tr = ode.integrate(KinkState(0.3, 0.0), PerturbationSpec(), dtau=0.1, tau_end=10)
    assert tr.crossing_time(1.0) == pytest.approx(1 / 0.3, abs=1e-12)
    with pytest.raises(NoCrossingError):
        tr.crossing_time(-1.0)


@given(u=st.floats(-0.999, 0.999), X=st.floats(-1e3, 1e3), eta=st.floats(-0.099, 0.099))
def test_rhs_finite(u, X, eta):
    du, dX = ode.rhs(KinkState(u, X), PerturbationSpec(alpha=0.01, gamma=-0.1, eta=eta))
    assert math.isfinite(du) and math.isfinite(dX)


def test_spec_validation():
    with pytest.raises(DomainError):
        PerturbationSpec(eta=0.2)
    with pytest.raises(DomainError):
        PerturbationSpec(gamma=1.0)
    with pytest.raises(DomainError):
        KinkState(1.0, 0.0)
