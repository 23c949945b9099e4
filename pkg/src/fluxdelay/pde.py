"""Finite-difference integration of the damped, biased sine-Gordon equation.

The field obeys, in dimensionless units,

    (1 - eta*delta(xi - xi_m)) phi_tt = phi_xixi - sin(phi) + gamma(xi) - alpha(xi) phi_t

where the optional delta-localised term is the state-dependent capacitance
added by a transmon at node ``m``.  Space uses the three-point Laplacian; time
uses velocity Verlet with the damping treated by the trapezoidal rule, so the
scheme stays explicit apart from one diagonal division.  The delta function
becomes ``1/dxi`` on the coupling node, i.e. that node simply carries the mass
``1 - eta/dxi``.

Runs are sequential and bitwise reproducible for identical inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import DomainError, NoCrossingError, NoKinkError, StabilityError
from .kink import KinkSpec, kink_phase, kink_phase_rate

#: |phi_dot| above this is treated as a numerical blow-up
BLOWUP_THRESHOLD = 1.0e3
DEFAULT_DXI = 0.025
DEFAULT_DTAU = 0.01
BOUNDARIES = ("fixed", "open")


@dataclass(frozen=True)
class Grid:
    """Uniform 1-D mesh ``xi_min + i*dxi`` for ``i = 0 .. n_points-1``."""

    n_points: int
    dxi: float
    xi_min: float = 0.0
    coupling_index: Optional[int] = None

    def __post_init__(self):
        if self.n_points < 16:
            raise DomainError(f"grid needs at least 16 points, got {self.n_points}")
        if not self.dxi > 0:
            raise DomainError(f"grid spacing must be > 0, got {self.dxi}")
        if self.coupling_index is not None and not 0 < self.coupling_index < self.n_points - 1:
            raise DomainError("coupling node must be an interior node")

    @classmethod
    def spanning(cls, xi_min: float, xi_max: float, dxi: float = DEFAULT_DXI, coupling_at: Optional[float] = None):
        """Grid covering [xi_min, xi_max]; ``coupling_at`` picks the nearest node."""
        n = int(round((xi_max - xi_min) / dxi)) + 1
        idx = None
        if coupling_at is not None:
            idx = int(round((coupling_at - xi_min) / dxi))
        return cls(n_points=n, dxi=dxi, xi_min=xi_min, coupling_index=idx)

    @property
    def length(self) -> float:
        return (self.n_points - 1) * self.dxi

    @property
    def xi(self) -> np.ndarray:
        return self.xi_min + self.dxi * np.arange(self.n_points)

    @property
    def coupling_xi(self) -> Optional[float]:
        if self.coupling_index is None:
            return None
        return self.xi_min + self.dxi * self.coupling_index

    def node(self, xi: float) -> int:
        i = int(round((xi - self.xi_min) / self.dxi))
        if not 0 <= i < self.n_points:
            raise DomainError(f"xi = {xi} lies outside the grid")
        return i


@dataclass(frozen=True, eq=False)
class FieldState:
    """Phase ``phi`` and its time derivative on every node at time ``tau``.

    Arrays are copied and frozen on construction.
    """

    phi: np.ndarray
    phi_dot: np.ndarray
    tau: float = 0.0

    def __post_init__(self):
        phi = np.array(self.phi, dtype=float)
        phi_dot = np.array(self.phi_dot, dtype=float)
        if phi.ndim != 1 or phi.shape != phi_dot.shape:
            raise DomainError("phi and phi_dot must be 1-D arrays of equal length")
        if not (np.all(np.isfinite(phi)) and np.all(np.isfinite(phi_dot))):
            raise DomainError("field state contains non-finite values")
        phi.flags.writeable = False
        phi_dot.flags.writeable = False
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "phi_dot", phi_dot)

    @property
    def voltage(self) -> np.ndarray:
        """Dimensionless voltage -d(phi)/d(tau)."""
        return -self.phi_dot


@dataclass(frozen=True)
class BiasProfile:
    """Piecewise-constant bias gamma(xi) and damping alpha(xi).

    Each profile is a sequence of ``(xi_start, value)`` pairs sorted by
    ``xi_start``; a value holds from its start until the next start.  Left of
    the first start the value is zero.
    """

    gamma_segments: tuple = ()
    alpha_segments: tuple = ()

    def __post_init__(self):
        g = tuple((float(a), float(b)) for a, b in self.gamma_segments)
        a = tuple((float(x), float(y)) for x, y in self.alpha_segments)
        object.__setattr__(self, "gamma_segments", g)
        object.__setattr__(self, "alpha_segments", a)
        for segs in (g, a):
            starts = [s for s, _ in segs]
            if starts != sorted(starts):
                raise DomainError("profile segments must be sorted by start position")
        if any(abs(v) >= 1.0 for _, v in g):
            raise DomainError("bias must be sub-critical, |gamma| < 1")
        if any(v < 0 for _, v in a):
            raise DomainError("damping must be >= 0")

    @classmethod
    def uniform(cls, gamma: float = 0.0, alpha: float = 0.0) -> "BiasProfile":
        return cls(((-math.inf, gamma),), ((-math.inf, alpha),))

    @classmethod
    def step(cls, xi_b: float, gamma: float, alpha: float = 0.0) -> "BiasProfile":
        """Zero bias for xi < xi_b, ``gamma`` beyond; uniform damping."""
        return cls(((xi_b, gamma),), ((-math.inf, alpha),))

    @staticmethod
    def _sample(segments, xi: np.ndarray) -> np.ndarray:
        out = np.zeros_like(xi)
        for start, value in segments:
            out[xi >= start] = value
        return out

    def gamma_on(self, grid: Grid) -> np.ndarray:
        return self._sample(self.gamma_segments, grid.xi)

    def alpha_on(self, grid: Grid) -> np.ndarray:
        return self._sample(self.alpha_segments, grid.xi)


@dataclass(frozen=True)
class CouplingTerm:
    """Delta-localised capacitive perturbation of strength ``eta`` at ``node``."""

    eta: float
    node: int

    def __post_init__(self):
        if not abs(self.eta) < 0.1:
            raise DomainError(f"|eta| must be < 0.1, got {self.eta}")


@dataclass
class Snapshot:
    tau: float
    phi: np.ndarray
    voltage: np.ndarray
    winding: int
    energy: float


@dataclass
class Trajectory:
    """Output of :func:`run`.

    ``centroids`` holds NaN wherever no single kink could be located.
    ``probe_voltage`` maps probe position -> voltage series sampled at ``taus``.
    """

    xi: np.ndarray
    taus: np.ndarray
    centroids: np.ndarray
    snapshots: list = field(default_factory=list)
    probe_voltage: dict = field(default_factory=dict)
    final: Optional[FieldState] = None

    def snapshot_at(self, tau: float) -> Snapshot:
        return min(self.snapshots, key=lambda s: abs(s.tau - tau))


def init_kink(grid: Grid, k: KinkSpec, boundary: str = "fixed") -> FieldState:
    """Sample the exact kink (phase and phase rate) on the grid at tau = 0.

    With ``boundary="fixed"`` the end nodes are snapped to the nearest
    multiple of 2*pi so they match the clamped boundary values.
    """
    _check_boundary(boundary)
    xi = grid.xi
    margin = 5.0
    if k.xi0 - xi[0] < margin or xi[-1] - k.xi0 < margin:
        raise DomainError(f"kink centroid {k.xi0} is closer than {margin} to a boundary")
    phi = kink_phase(xi, 0.0, k)
    phi_dot = kink_phase_rate(xi, 0.0, k)
    if boundary == "fixed":
        phi[0] = 2 * np.pi * round(phi[0] / (2 * np.pi))
        phi[-1] = 2 * np.pi * round(phi[-1] / (2 * np.pi))
        phi_dot[0] = phi_dot[-1] = 0.0
    return FieldState(phi, phi_dot, 0.0)


def _check_boundary(boundary: str) -> None:
    if boundary not in BOUNDARIES:
        raise DomainError(f"boundary must be one of {BOUNDARIES}, got {boundary!r}")


class _Stepper:
    """Velocity-Verlet kernel with all per-node coefficients precomputed."""

    def __init__(self, grid: Grid, bias: BiasProfile, coupling: Optional[CouplingTerm], dtau: float, boundary: str):
        _check_boundary(boundary)
        if not 0 < dtau <= 0.5 * grid.dxi:
            raise DomainError(f"dtau = {dtau} violates 0 < dtau <= dxi/2 = {0.5 * grid.dxi}")
        self.n = grid.n_points
        self.dt = dtau
        self.inv_dx2 = 1.0 / grid.dxi**2
        self.fixed = boundary == "fixed"
        self.gamma = bias.gamma_on(grid)
        self.alpha = bias.alpha_on(grid)
        inv_mass = np.ones(self.n)
        if coupling is not None:
            if not 0 < coupling.node < self.n - 1:
                raise DomainError("coupling node must be an interior node")
            mass = 1.0 - coupling.eta / grid.dxi
            if mass <= 0.1:
                raise DomainError(f"eta/dxi = {coupling.eta / grid.dxi:.3g} too large; refine the grid")
            inv_mass[coupling.node] = 1.0 / mass
        if self.fixed:
            inv_mass[0] = inv_mass[-1] = 0.0
        self.half_dt_inv_mass = 0.5 * dtau * inv_mass
        self.implicit_damping = 1.0 / (1.0 + self.half_dt_inv_mass * self.alpha)
        self.has_gamma = bool(np.any(self.gamma))
        self.has_alpha = bool(np.any(self.alpha))
        self._force = np.empty(self.n)

    def force(self, phi: np.ndarray) -> np.ndarray:
        f = self._force
        np.subtract(phi[2:], 2.0 * phi[1:-1], out=f[1:-1])
        f[1:-1] += phi[:-2]
        if self.fixed:
            f[0] = f[-1] = 0.0
        else:
            f[0] = 2.0 * (phi[1] - phi[0])
            f[-1] = 2.0 * (phi[-2] - phi[-1])
        f *= self.inv_dx2
        f -= np.sin(phi)
        if self.has_gamma:
            f += self.gamma
        return f

    def advance(self, phi: np.ndarray, v: np.ndarray, f: np.ndarray, n_steps: int) -> np.ndarray:
        """Advance ``phi``/``v`` in place by ``n_steps``; ``f`` is force(phi).

        Returns the force at the new position (first-same-as-last reuse).
        """
        h = self.half_dt_inv_mass
        dt = self.dt
        for _ in range(n_steps):
            if self.has_alpha:
                v += h * (f - self.alpha * v)
            else:
                v += h * f
            phi += dt * v
            f = self.force(phi)
            v += h * f
            if self.has_alpha:
                v *= self.implicit_damping
        return f

    def check(self, v: np.ndarray, tau: float) -> None:
        m = np.max(np.abs(v))
        if not m <= BLOWUP_THRESHOLD:
            raise StabilityError(f"|phi_dot| = {m:.3g} exceeded {BLOWUP_THRESHOLD:g} at tau = {tau:.6g}")


def step(
    state: FieldState,
    grid: Grid,
    bias: BiasProfile,
    coupling: Optional[CouplingTerm] = None,
    dtau: float = DEFAULT_DTAU,
    boundary: str = "fixed",
) -> FieldState:
    """Advance a field state by one time step."""
    if state.phi.shape != (grid.n_points,):
        raise DomainError("state does not match grid")
    s = _Stepper(grid, bias, coupling, dtau, boundary)
    phi = state.phi.copy()
    v = state.phi_dot.copy()
    s.advance(phi, v, s.force(phi).copy(), 1)
    tau = state.tau + dtau
    s.check(v, tau)
    return FieldState(phi, v, tau)


def run(
    initial: FieldState,
    grid: Grid,
    bias: BiasProfile,
    coupling: Optional[CouplingTerm] = None,
    dtau: float = DEFAULT_DTAU,
    tau_end: float = 100.0,
    snapshot_times: Iterable[float] = (),
    boundary: str = "fixed",
    record_every: int = 10,
    probes: Sequence[float] = (),
) -> Trajectory:
    """Integrate from ``initial`` up to ``tau_end``.

    Centroid and probe voltages are recorded every ``record_every`` steps;
    snapshots (phase, voltage, winding number, energy) are taken at the step
    nearest to each requested time.

    Raises
    ------
    StabilityError
        If |phi_dot| exceeds :data:`BLOWUP_THRESHOLD` at any recorded step.
    """
    if initial.phi.shape != (grid.n_points,):
        raise DomainError("state does not match grid")
    s = _Stepper(grid, bias, coupling, dtau, boundary)
    n_total = int(round((tau_end - initial.tau) / dtau))
    if n_total < 0:
        raise DomainError("tau_end lies before the initial time")
    record_every = max(1, int(record_every))
    snap_steps = {}
    for t in snapshot_times:
        i = int(round((t - initial.tau) / dtau))
        if 0 <= i <= n_total:
            snap_steps.setdefault(i, float(t))
    probe_nodes = {float(x): grid.node(x) for x in probes}

    record_steps = set(range(0, n_total + 1, record_every)) | {n_total}
    stops = sorted(record_steps | set(snap_steps))

    xi = grid.xi
    phi = initial.phi.copy()
    v = initial.phi_dot.copy()
    f = s.force(phi).copy()
    taus, cents = [], []
    probe_series = {x: [] for x in probe_nodes}
    snapshots = []
    done = 0
    for target in stops:
        f = s.advance(phi, v, f, target - done).copy()
        done = target
        tau = initial.tau + done * dtau
        s.check(v, tau)
        if done in record_steps:
            taus.append(tau)
            try:
                cents.append(_centroid(phi, xi))
            except NoKinkError:
                cents.append(math.nan)
            for x, node in probe_nodes.items():
                probe_series[x].append(-v[node])
        if done in snap_steps:
            st = FieldState(phi, v, tau)
            snapshots.append(Snapshot(tau, st.phi, st.voltage.copy(), winding_number(st), energy(st, grid)))

    return Trajectory(
        xi=xi,
        taus=np.array(taus),
        centroids=np.array(cents),
        snapshots=snapshots,
        probe_voltage={x: np.array(vals) for x, vals in probe_series.items()},
        final=FieldState(phi, v, initial.tau + n_total * dtau),
    )


def _centroid(phi: np.ndarray, xi: np.ndarray) -> float:
    s = phi - np.pi
    neg = s < 0
    idx = np.flatnonzero(neg[:-1] != neg[1:])
    if idx.size == 0:
        raise NoKinkError("phase never crosses pi")
    if idx.size > 1 and xi[idx[-1]] - xi[idx[0]] > 2.0:
        raise NoKinkError("several pi crossings more than 2 units apart")
    i = int(idx[idx.size // 2])
    return float(xi[i] + (xi[i + 1] - xi[i]) * s[i] / (s[i] - s[i + 1]))


def centroid(state: FieldState, grid: Grid) -> float:
    """Position where the phase crosses pi, linearly interpolated between nodes."""
    return _centroid(np.asarray(state.phi), grid.xi)


def arrival_time(trajectory: Trajectory, xi_probe: float) -> float:
    """Time at which the recorded centroid first crosses ``xi_probe``."""
    t = trajectory.taus
    c = trajectory.centroids
    ok = np.isfinite(c)
    t, c = t[ok], c[ok]
    d = c - xi_probe
    idx = np.flatnonzero((d[:-1] < 0) & (d[1:] >= 0) | (d[:-1] > 0) & (d[1:] <= 0))
    if idx.size == 0:
        raise NoCrossingError(f"centroid never crosses xi = {xi_probe}")
    i = int(idx[0])
    return float(t[i] + (t[i + 1] - t[i]) * d[i] / (d[i] - d[i + 1]))


def winding_number(state: FieldState) -> int:
    """Number of flux quanta, round((phi_last - phi_first)/2pi)."""
    return int(round((state.phi[-1] - state.phi[0]) / (2 * np.pi)))


def energy(state: FieldState, grid: Grid) -> float:
    """Dimensionless sine-Gordon energy, integral of 1/2 phi_t^2 + 1/2 phi_xi^2 + 1 - cos(phi)."""
    phi = np.asarray(state.phi)
    v = np.asarray(state.phi_dot)
    dx = grid.dxi
    local = 0.5 * v * v + (1.0 - np.cos(phi))
    onsite = dx * (local.sum() - 0.5 * (local[0] + local[-1]))
    grad = np.diff(phi) / dx
    return float(onsite + 0.5 * dx * np.dot(grad, grad))


def flux_through(trajectory: Trajectory, xi_probe: float) -> float:
    """Time integral of the dimensionless voltage recorded at a probe."""
    volts = trajectory.probe_voltage[float(xi_probe)]
    return float(np.trapezoid(volts, trajectory.taus))
