"""Closed-form readout figures of merit.

Delay formulas for the two-level and multi-level transmon, the pinning test,
Fermi-golden-rule transition probabilities and the bias-separation condition.
All functions are pure and return plain floats or small dataclasses.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from ._special import sech
from .errors import DomainError
from .kink import coupling_peak
from .params import DerivedParams, level_frequency

#: time resolution of an SFQ time-to-digital converter (s)
DETECTOR_RESOLUTION = 5e-12
#: factor used to read "much greater than" as a hard check
MUCH_GREATER = 10.0


@dataclass(frozen=True)
class DelayResult:
    tau_d: float
    T_d: float
    exceeds_detector: bool

    def to_dict(self):
        return asdict(self)


def _check_velocity(u0):
    if not 0.0 < u0 < 1.0:
        raise DomainError(f"u0 must lie in (0, 1), got {u0}")


def time_delay_qubit(u0: float, d: DerivedParams, eta: float | None = None) -> DelayResult:
    """Arrival-time difference between qubit states |0> and |1> (two-level transmon).

    ``tau_d = eta_c (1 - u0^2)/u0`` in units of 1/omega_p, converted to
    seconds in ``T_d``.  Passing ``eta`` overrides eta_c (sign included).
    The result is only trustworthy when alpha << eta_c u0; see
    :func:`delay_regime_ok`.
    """
    _check_velocity(u0)
    e = d.eta_c if eta is None else eta
    tau_d = e * (1.0 - u0 * u0) / u0
    T_d = tau_d / d.omega_p
    return DelayResult(tau_d, T_d, bool(T_d > DETECTOR_RESOLUTION))


def delay_regime_ok(u0: float, alpha: float, eta: float) -> bool:
    """True when damping is small against the coupling, alpha < |eta| u0."""
    return alpha < abs(eta) * u0


def time_delay_multilevel(n: int, u0: float, d: DerivedParams) -> float:
    """Signed dimensionless delay tau_|n> - tau_|n+1> for a multi-level transmon.

    Negative, and smaller than the two-level result by roughly p/(1-2p).
    """
    _check_velocity(u0)
    p = d.p
    if n < 0:
        raise DomainError(f"level index must be >= 0, got {n}")
    if (n + 2) * p >= 1.0:
        raise DomainError(f"(n+2)p = {(n + 2) * p:.3g} >= 1 for n={n}")
    denom = u0 * (1 - n * p) * (1 - (n + 1) * p) * (1 - (n + 2) * p)
    return -(1.0 - u0 * u0) * p * d.eta_bare / denom


def time_delay_multilevel_magnitude(n: int, u0: float, d: DerivedParams) -> float:
    return abs(time_delay_multilevel(n, u0, d))


@dataclass(frozen=True)
class PinningReport:
    pinned: bool
    required_sech2: float


def pinning_report(eta: float) -> PinningReport:
    """Check whether a coupling ``eta`` could stop the kink.

    Pinning needs sech^2(Xi) = -2/eta to have a real solution, i.e. the
    right-hand side must lie in (0, 1].  That requires eta <= -2, far outside
    the perturbative regime.
    """
    if eta == 0:
        raise DomainError("pinning test needs a non-zero coupling")
    required = -2.0 / eta
    return PinningReport(0.0 < required <= 1.0, required)


def _transition(prefactor: float, omega: float, u0: float, d: DerivedParams) -> float:
    c = d.circuit
    arg = 0.5 * math.pi * math.sqrt(1.0 - u0 * u0) * omega / (u0 * d.omega_p)
    s = sech(arg)
    prob = 2.0 * prefactor * math.pi**2 * d.n0_tr**2 * (c.C_c / c.C_Sigma) ** 2 * s * s
    return min(max(prob, 0.0), 1.0)


def transition_probability_qubit(u0: float, d: DerivedParams) -> float:
    """Probability of a |0> <-> |1> flip caused by one passing kink.

    ``2 pi^2 n0^2 (C_c/C_Sigma)^2 sech^2(pi/2 * sqrt(1-u0^2) omega_q/(u0 omega_p))``,
    clamped to [0, 1].  Exponentially small once
    sqrt(1-u0^2)/u0 >> 2 omega_p/(pi omega_q).
    """
    _check_velocity(u0)
    return _transition(1.0, d.omega_q, u0, d)


def transition_probability_multilevel(n_i: int, direction: str, u0: float, d: DerivedParams) -> float:
    """Probability of |n_i> -> |n_i +- 1> for a multi-level transmon.

    Upward transitions carry the bosonic factor n_i + 1 and the frequency
    omega_{n_i+1}; downward ones n_i and omega_{n_i}.
    """
    _check_velocity(u0)
    if n_i < 0:
        raise DomainError(f"level index must be >= 0, got {n_i}")
    if direction == "up":
        return _transition(n_i + 1, level_frequency(n_i + 1, d), u0, d)
    if direction == "down":
        if n_i == 0:
            raise DomainError("no level below |0>")
        return _transition(n_i, level_frequency(n_i, d), u0, d)
    raise DomainError(f"direction must be 'up' or 'down', got {direction!r}")


def adiabaticity_ratio(omega_p: float, omega_q: float) -> float:
    """2 omega_p / (pi omega_q); transitions are suppressed when sqrt(1-u0^2)/u0 exceeds it."""
    return 2.0 * omega_p / (math.pi * omega_q)


def weak_coupling_ok(u0: float, d: DerivedParams, factor: float = MUCH_GREATER) -> bool:
    """True when the peak drive is at least ``factor`` times below the qubit frequency."""
    return factor * coupling_peak(u0, d) <= d.omega_q


@dataclass(frozen=True)
class SeparationReport:
    satisfied: bool
    margin: float
    threshold: float = MUCH_GREATER


def separation_condition(gamma: float, alpha: float, u0: float, eta: float) -> SeparationReport:
    """Can a bias region pull the |0> and |1> kinks apart by more than a kink width?

    ``margin = |gamma| * eta / (alpha * u0)``; satisfied when margin >= 10.
    """
    if eta <= 0 or u0 <= 0:
        raise DomainError("separation condition needs eta > 0 and u0 > 0")
    if alpha == 0:
        margin = math.inf if gamma != 0 else 0.0
    else:
        margin = abs(gamma) * eta / (alpha * u0)
    return SeparationReport(margin >= MUCH_GREATER, margin)


def spatial_delay_width(u0: float, tau_d: float) -> float:
    """Spatial gap u0 * tau_d between the two delayed kinks."""
    return u0 * tau_d
