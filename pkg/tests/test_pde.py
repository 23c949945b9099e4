import math

import numpy as np
import pytest
from scipy.integrate import quad

from fluxdelay import ode, pde
from fluxdelay.errors import DomainError, NoCrossingError, NoKinkError, StabilityError
from fluxdelay.kink import KinkSpec

FREE = pde.BiasProfile.uniform(0.0, 0.0)


def _grid(a=-20.0, b=40.0, dxi=pde.DEFAULT_DXI, **kw):
    return pde.Grid.spanning(a, b, dxi, **kw)


def _velocity(traj, t_min=2.0, t_max=None):
    m = traj.taus >= t_min
    if t_max is not None:
        m &= traj.taus <= t_max
    return np.polyfit(traj.taus[m], traj.centroids[m], 1)[0]


def _kink_energy_by_quadrature(u):
    # energy density of the exact moving kink at tau = 0
    w = math.sqrt(1 - u * u)

    def density(x):
        s = 1 / math.cosh(x / w)
        phi_x = 2 * s / w
        phi_t = -u * phi_x
        return 0.5 * phi_t**2 + 0.5 * phi_x**2 + 2 * s * s

    return quad(density, -50, 50, points=[0.0], limit=200)[0]


def test_grid_invariants():
    g = _grid(coupling_at=0.0)
    assert g.length == pytest.approx(60.0)
    assert g.coupling_xi == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(DomainError):
        pde.Grid(8, 0.1)
    with pytest.raises(DomainError):
        pde.Grid(100, 0.1, coupling_index=0)
    with pytest.raises(DomainError):
        pde.Grid(100, -0.1)


def test_bias_profile():
    g = pde.Grid.spanning(0, 100, 0.5)
    b = pde.BiasProfile.step(15.0, -0.1, 1e-6)
    gam = b.gamma_on(g)
    assert np.all(gam[g.xi < 15] == 0) and np.all(gam[g.xi >= 15] == -0.1)
    assert np.all(b.alpha_on(g) == 1e-6)
    with pytest.raises(DomainError):
        pde.BiasProfile.uniform(1.2, 0.0)
    with pytest.raises(DomainError):
        pde.BiasProfile.uniform(0.0, -1.0)


def test_coupling_bound():
    with pytest.raises(DomainError):
        pde.CouplingTerm(0.2, 10)


def test_init_kink():
    g = _grid()
    s = pde.init_kink(g, KinkSpec(0.0, 10.0))
    assert np.all(s.phi_dot == 0)
    assert pde.winding_number(s) == 1
    assert s.tau == 0.0
    with pytest.raises(DomainError):
        pde.init_kink(g, KinkSpec(0.0, 37.0))


def test_vacuum_fixed_point():
    g = _grid()
    s = pde.FieldState(np.zeros(g.n_points), np.zeros(g.n_points))
    tr = pde.run(s, g, FREE, dtau=0.01, tau_end=5.0, snapshot_times=[5.0])
    assert np.all(tr.final.phi == 0) and np.all(tr.final.phi_dot == 0)
    assert pde.winding_number(s) == 0
    assert pde.energy(s, g) == 0.0
    with pytest.raises(NoKinkError):
        pde.centroid(s, g)
    assert np.all(np.isnan(tr.centroids))


def test_static_energy():
    oracle = _kink_energy_by_quadrature(0.0)
    assert oracle == pytest.approx(8.0, abs=1e-9)
    g = _grid()
    assert pde.energy(pde.init_kink(g, KinkSpec(0.0, 10.0)), g) == pytest.approx(oracle, abs=1e-3)


@pytest.mark.parametrize("u", [0.1, 0.5, 0.9])
def test_moving_energy(u):
    oracle = _kink_energy_by_quadrature(u)
    assert oracle == pytest.approx(8 / math.sqrt(1 - u * u), rel=1e-9)
    g = _grid()
    assert pde.energy(pde.init_kink(g, KinkSpec(u, 0.0), "open"), g) == pytest.approx(oracle, rel=1e-3)


def test_free_kink_speed():
    g = _grid()
    tr = pde.run(pde.init_kink(g, KinkSpec(0.5, 0.0), "open"), g, FREE, dtau=0.01, tau_end=10.0, boundary="open", record_every=1)
    assert len(tr.taus) == 1001
    v = (tr.centroids[-1] - tr.centroids[0]) / (tr.taus[-1] - tr.taus[0])
    assert v == pytest.approx(0.5, abs=1e-3)


def test_centroid_positions():
    g = pde.Grid.spanning(0, 100, 0.025)
    s = pde.init_kink(g, KinkSpec(0.3, 50.0), "open")
    assert pde.centroid(s, g) == pytest.approx(50.0, abs=0.0125)
    tr = pde.run(s, g, FREE, dtau=0.01, tau_end=10.0, boundary="open")
    assert pde.centroid(tr.final, g) == pytest.approx(53.0, abs=0.05)


def test_arrival_time():
    g = _grid()
    tr = pde.run(pde.init_kink(g, KinkSpec(0.01, 0.0), "open"), g, FREE, dtau=0.01, tau_end=120.0, boundary="open")
    assert pde.arrival_time(tr, 1.0) == pytest.approx(100.0, abs=0.01)
    with pytest.raises(NoCrossingError):
        pde.arrival_time(tr, -1.0)


def test_energy_conserved_without_loss():
    g = pde.Grid.spanning(-40, 40, 0.025)
    tr = pde.run(pde.init_kink(g, KinkSpec(0.3, -15.0)), g, FREE, tau_end=100.0, snapshot_times=[0, 25, 50, 75, 100])
    e0 = tr.snapshots[0].energy
    assert max(abs(s.energy / e0 - 1) for s in tr.snapshots) < 1e-4


def test_energy_decreases_with_damping():
    g = pde.Grid.spanning(-30, 30, 0.025)
    times = list(np.arange(0, 60.1, 5.0))
    tr = pde.run(pde.init_kink(g, KinkSpec(0.6, -10.0)), g, pde.BiasProfile.uniform(0.0, 0.05), tau_end=60.0, snapshot_times=times)
    e = [s.energy for s in tr.snapshots]
    assert all(b <= a for a, b in zip(e, e[1:]))
    assert e[-1] < e[0]


def test_winding_conserved_fixed_ends():
    g = pde.Grid.spanning(0, 60, 0.025)
    times = list(range(0, 201, 20))
    tr = pde.run(pde.init_kink(g, KinkSpec(0.2, 20.0)), g, pde.BiasProfile.step(30.0, -0.05, 1e-3), tau_end=200.0, snapshot_times=times)
    assert {s.winding for s in tr.snapshots} == {1}


def test_flux_quantum_through_probe():
    g = pde.Grid.spanning(-40, 40, 0.025)
    tr = pde.run(pde.init_kink(g, KinkSpec(0.3, -15.0), "open"), g, FREE, tau_end=100.0, boundary="open", probes=[0.0], record_every=1)
    assert pde.flux_through(tr, 0.0) == pytest.approx(2 * math.pi, abs=1e-3)


def test_second_order_in_space():
    def err(dxi):
        g = _grid(dxi=dxi)
        tr = pde.run(pde.init_kink(g, KinkSpec(0.5, 0.0), "open"), g, FREE, dtau=0.4 * dxi, tau_end=20.0, boundary="open", record_every=1)
        return abs(_velocity(tr) - 0.5)

    e1, e2 = err(0.1), err(0.05)
    assert e1 / e2 >= 3.0


def test_time_translation():
    u, shift = 0.05, 7.0

    def arrival(x0):
        g = pde.Grid.spanning(-10, 30, 0.025)
        tr = pde.run(pde.init_kink(g, KinkSpec(u, x0), "open"), g, pde.BiasProfile.uniform(0.0, 1e-6), tau_end=300.0, boundary="open", record_every=1)
        return pde.arrival_time(tr, 10.0)

    assert arrival(-u * shift) - arrival(0.0) == pytest.approx(shift, abs=pde.DEFAULT_DTAU)


def test_steady_state_velocity_moderate_damping():
    g = pde.Grid.spanning(0, 120, 0.025)
    tr = pde.run(pde.init_kink(g, KinkSpec(0.01, 10.0), "open"), g, pde.BiasProfile.uniform(-0.1, 0.1), tau_end=150.0, boundary="open")
    assert _velocity(tr, 100.0, 150.0) == pytest.approx(ode.steady_state_velocity(-0.1, 0.1), rel=0.01)


def test_steady_state_velocity_weak_damping():
    g = pde.Grid.spanning(0, 200, 0.025)
    tr = pde.run(pde.init_kink(g, KinkSpec(0.01, 10.0), "open"), g, pde.BiasProfile.uniform(-0.1, 1e-6), tau_end=170.0, boundary="open")
    assert _velocity(tr, 120.0, 170.0) == pytest.approx(ode.steady_state_velocity(-0.1, 1e-6), rel=0.01)


def test_step_matches_run():
    g = _grid()
    s = pde.init_kink(g, KinkSpec(0.2, 0.0), "open")
    one = s
    for _ in range(5):
        one = pde.step(one, g, FREE, None, 0.01, "open")
    tr = pde.run(s, g, FREE, dtau=0.01, tau_end=0.05, boundary="open", record_every=1)
    assert np.array_equal(one.phi, tr.final.phi)
    assert one.tau == pytest.approx(0.05)


def test_deterministic():
    g = _grid(coupling_at=10.0)
    s = pde.init_kink(g, KinkSpec(0.1, 0.0), "open")
    c = pde.CouplingTerm(2.9e-3, g.coupling_index)
    a = pde.run(s, g, FREE, c, tau_end=50.0, boundary="open")
    b = pde.run(s, g, FREE, c, tau_end=50.0, boundary="open")
    assert np.array_equal(a.final.phi, b.final.phi)


def test_stability_guards():
    g = _grid()
    with pytest.raises(DomainError):
        pde.step(pde.init_kink(g, KinkSpec()), g, FREE, dtau=0.02)
    v = np.zeros(g.n_points)
    v[100] = 2e3
    with pytest.raises(StabilityError):
        pde.step(pde.FieldState(np.zeros(g.n_points), v), g, FREE)
    with pytest.raises(DomainError):
        pde.step(pde.init_kink(g, KinkSpec()), g, FREE, boundary="periodic")


def test_state_immutable():
    g = _grid()
    s = pde.init_kink(g, KinkSpec())
    with pytest.raises(ValueError):
        s.phi[3] = 1.0
    with pytest.raises(DomainError):
        pde.FieldState([0.0, math.nan], [0.0, 0.0])
