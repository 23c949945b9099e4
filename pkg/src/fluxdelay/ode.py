"""Collective-coordinate dynamics of a perturbed kink.

The kink keeps its shape ``4*arctan(exp((xi - Xi)/sqrt(1-u^2)))`` and only its
velocity ``u`` and centroid ``Xi`` evolve.  The right-hand side combines a
uniform bias, damping and a delta-localised capacitive coupling of strength
``eta`` placed at xi = 0:

    du/dtau  = -pi/4 gamma (1-u^2)^(3/2) - alpha u (1-u^2) - eta/2 u^2 S(Theta0)
    dXi/dtau = u + eta/2 u^3/sqrt(1-u^2) Theta0 S(Theta0)

with ``Theta0 = Xi/sqrt(1-u^2)`` and ``S = sech^3 * sinh``.
Integration uses fixed-step classical RK4 so trajectories are reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._special import sech, sech3_sinh
from .errors import DomainError, NoCrossingError, RangeError

DEFAULT_DTAU = 0.01
MAX_DTAU = 0.1
#: launch/probe distance from the coupling site; sech^2(10) < 1e-8
LAUNCH_DISTANCE = 10.0
_U_LIMIT = 1.0 - 1e-12


@dataclass(frozen=True)
class KinkState:
    u: float
    Xi: float
    tau: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.u) and math.isfinite(self.Xi) and math.isfinite(self.tau)):
            raise DomainError("kink state must be finite")
        if not -1.0 < self.u < 1.0:
            raise DomainError(f"velocity must satisfy -1 < u < 1, got {self.u}")


@dataclass(frozen=True)
class PerturbationSpec:
    alpha: float = 0.0
    gamma: float = 0.0
    eta: float = 0.0

    def __post_init__(self):
        if self.alpha < 0:
            raise DomainError(f"alpha must be >= 0, got {self.alpha}")
        if not abs(self.gamma) < 1:
            raise DomainError(f"|gamma| must be < 1, got {self.gamma}")
        if not abs(self.eta) < 0.1:
            raise DomainError(f"|eta| must be < 0.1, got {self.eta}")


@dataclass
class KinkTrajectory:
    tau: np.ndarray
    u: np.ndarray
    Xi: np.ndarray

    @property
    def final(self) -> KinkState:
        return KinkState(float(self.u[-1]), float(self.Xi[-1]), float(self.tau[-1]))

    def crossing_time(self, xi_probe: float) -> float:
        """First time Xi reaches ``xi_probe`` (cubic Hermite interpolation)."""
        d = self.Xi - xi_probe
        idx = np.flatnonzero((d[:-1] < 0) & (d[1:] >= 0) | (d[:-1] > 0) & (d[1:] <= 0))
        if idx.size == 0:
            raise NoCrossingError(f"centroid never crosses Xi = {xi_probe}")
        i = int(idx[0])
        return _hermite_root(self.tau[i], self.tau[i + 1], d[i], d[i + 1], self.u[i], self.u[i + 1])


def _hermite_root(t0, t1, d0, d1, v0, v1):
    # Xi is smooth with dXi/dtau ~ u; refine the linear root with a cubic
    # Hermite interpolant using u as the slope.
    h = t1 - t0
    s = d0 / (d0 - d1)
    for _ in range(8):
        h00 = 2 * s**3 - 3 * s**2 + 1
        h10 = s**3 - 2 * s**2 + s
        h01 = -2 * s**3 + 3 * s**2
        h11 = s**3 - s**2
        f = h00 * d0 + h10 * h * v0 + h01 * d1 + h11 * h * v1
        df = (6 * s**2 - 6 * s) * d0 + (3 * s**2 - 4 * s + 1) * h * v0 + (-6 * s**2 + 6 * s) * d1 + (3 * s**2 - 2 * s) * h * v1
        if df == 0:
            break
        s = min(max(s - f / df, 0.0), 1.0)
    return t0 + s * h


def _rhs(u: float, Xi: float, alpha: float, gamma: float, eta: float):
    w2 = 1.0 - u * u
    du = -alpha * u * w2
    if gamma:
        du -= 0.25 * math.pi * gamma * w2 * math.sqrt(w2)
    dXi = u
    if eta:
        w = math.sqrt(w2)
        theta = Xi / w
        s = sech3_sinh(theta)
        du -= 0.5 * eta * u * u * s
        dXi += 0.5 * eta * u**3 / w * theta * s
    return du, dXi


def rhs(state: KinkState, p: PerturbationSpec) -> tuple[float, float]:
    """Return (du/dtau, dXi/dtau) for the combined bias, damping and coupling."""
    return _rhs(state.u, state.Xi, p.alpha, p.gamma, p.eta)


def _rk4(u, Xi, h, a, g, e):
    k1u, k1x = _rhs(u, Xi, a, g, e)
    k2u, k2x = _rhs(u + 0.5 * h * k1u, Xi + 0.5 * h * k1x, a, g, e)
    k3u, k3x = _rhs(u + 0.5 * h * k2u, Xi + 0.5 * h * k2x, a, g, e)
    k4u, k4x = _rhs(u + h * k3u, Xi + h * k3x, a, g, e)
    u = u + h / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u)
    Xi = Xi + h / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x)
    if not abs(u) < _U_LIMIT:
        raise RangeError(f"|u| reached the light-cone bound (u = {u!r})")
    return u, Xi


def _check_dtau(dtau):
    if not 0 < dtau <= MAX_DTAU:
        raise DomainError(f"dtau must lie in (0, {MAX_DTAU}], got {dtau}")


def integrate(initial: KinkState, p: PerturbationSpec, dtau: float = DEFAULT_DTAU, tau_end: float = 100.0) -> KinkTrajectory:
    """Fixed-step RK4 trajectory from ``initial.tau`` to ``tau_end``.

    The last step is shortened so the trajectory ends exactly at ``tau_end``.

    Raises
    ------
    RangeError
        If |u| reaches 1 - 1e-12.
    """
    _check_dtau(dtau)
    span = tau_end - initial.tau
    if span < 0:
        raise DomainError("tau_end lies before the initial time")
    n_full = int(math.floor(span / dtau + 1e-9))
    rest = span - n_full * dtau
    n = n_full + (1 if rest > 1e-12 * max(1.0, span) else 0)
    tau = np.empty(n + 1)
    us = np.empty(n + 1)
    xs = np.empty(n + 1)
    u, Xi = initial.u, initial.Xi
    tau[0], us[0], xs[0] = initial.tau, u, Xi
    a, g, e = p.alpha, p.gamma, p.eta
    for i in range(1, n + 1):
        h = dtau if i <= n_full else rest
        u, Xi = _rk4(u, Xi, h, a, g, e)
        tau[i] = initial.tau + (i * dtau if i <= n_full else span)
        us[i], xs[i] = u, Xi
    return KinkTrajectory(tau, us, xs)


def integrate_to(initial: KinkState, p: PerturbationSpec, xi_stop: float, dtau: float = DEFAULT_DTAU, tau_max: float | None = None) -> KinkTrajectory:
    """Integrate until the centroid passes ``xi_stop`` (one step beyond).

    Stops early, without error, once ``tau_max`` is reached or the kink turns
    around; :meth:`KinkTrajectory.crossing_time` then raises
    :class:`NoCrossingError`.
    """
    _check_dtau(dtau)
    direction = 1.0 if xi_stop >= initial.Xi else -1.0
    if tau_max is None:
        speed = abs(initial.u) or 1e-3
        tau_max = initial.tau + 20.0 * abs(xi_stop - initial.Xi) / speed
    taus, us, xs = [initial.tau], [initial.u], [initial.Xi]
    u, Xi, tau = initial.u, initial.Xi, initial.tau
    a, g, e = p.alpha, p.gamma, p.eta
    while direction * (Xi - xi_stop) < 0 and tau < tau_max:
        u, Xi = _rk4(u, Xi, dtau, a, g, e)
        tau += dtau
        taus.append(tau)
        us.append(u)
        xs.append(Xi)
        if direction * u <= 0:
            break
        # damping alone can carry the kink at most artanh|u|/alpha further;
        # the coupling changes |u| by a relative O(eta) only
        if not g and a > 0 and math.atanh(abs(u)) * (1 + 2 * abs(e)) < a * direction * (xi_stop - Xi):
            break
    return KinkTrajectory(np.array(taus), np.array(us), np.array(xs))


def steady_state_velocity(gamma: float, alpha: float) -> float:
    """Velocity at which bias drive balances damping, ``-sign(gamma)/sqrt(1+(4 alpha/(pi gamma))^2)``."""
    if alpha < 0:
        raise DomainError("alpha must be >= 0")
    if gamma == 0:
        if alpha > 0:
            return 0.0
        raise DomainError("no unique steady state without bias and damping")
    if alpha == 0:
        raise DomainError("undamped biased kink has no steady state (|u| -> 1)")
    r = 4.0 * alpha / (math.pi * gamma)
    return -math.copysign(1.0, gamma) / math.sqrt(1.0 + r * r)


def analytic_velocity(u0: float, eta: float, Theta0: float) -> float:
    """Velocity at position Theta0 from the first-order coupling-only solution.

    Solves ``sqrt(1-u^2) = sqrt(1-u0^2) - eta/4 * u0^2 * sech^2(Theta0)`` for u,
    returning the branch with the sign of u0.
    """
    if not -1.0 < u0 < 1.0:
        raise DomainError(f"u0 must satisfy -1 < u0 < 1, got {u0}")
    s = sech(Theta0)
    w0 = math.sqrt(1.0 - u0 * u0)
    delta = 0.25 * eta * u0 * u0 * s * s
    # 1 - w^2 written as u0^2 + delta (2 w0 - delta) to avoid cancellation
    u = math.sqrt(max(0.0, u0 * u0 + delta * (2.0 * w0 - delta)))
    return math.copysign(u, u0) if u0 else 0.0


@dataclass(frozen=True)
class DelayMeasurement:
    tau_d: float
    tau_up: float
    tau_down: float
    regime_ok: bool

    def __float__(self):
        return float(self.tau_d)


def measure_delay(
    u0: float,
    p_up: PerturbationSpec,
    p_down: PerturbationSpec,
    dtau: float = DEFAULT_DTAU,
    xi_launch: float = -LAUNCH_DISTANCE,
    xi_probe: float = LAUNCH_DISTANCE,
) -> DelayMeasurement:
    """Delay tau_down - tau_up between kinks launched at ``xi_launch`` with velocity u0.

    Each kink is integrated until its centroid passes ``xi_probe`` and the
    crossing times are subtracted.  ``regime_ok`` is False when damping is not
    small against the coupling, i.e. alpha >= |eta| * u0 for either spec.

    Raises
    ------
    NoCrossingError
        If a kink stops before reaching the probe (strong damping).
    """
    if not 0 < u0 < 1:
        raise DomainError(f"u0 must lie in (0, 1), got {u0}")
    start = KinkState(u0, xi_launch, 0.0)
    t_up = float(integrate_to(start, p_up, xi_probe, dtau).crossing_time(xi_probe))
    t_down = float(integrate_to(start, p_down, xi_probe, dtau).crossing_time(xi_probe))
    coupled = [p for p in (p_up, p_down) if p.eta]
    ok = bool(coupled) and all(p.alpha < abs(p.eta) * u0 for p in coupled)
    return DelayMeasurement(t_down - t_up, t_up, t_down, ok)
