"""Closed-form sine-Gordon kink, its SFQ voltage pulse and the qubit drive it induces."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._special import sech
from .errors import DomainError
from .params import PHI0, DerivedParams


@dataclass(frozen=True)
class KinkSpec:
    """A free kink moving with velocity ``u0`` that sits at ``xi0`` when tau = 0.

    ``polarity=+1`` winds the phase from 0 (left) to 2*pi (right).
    """

    u0: float = 0.0
    xi0: float = 0.0
    polarity: int = 1

    def __post_init__(self):
        if not -1.0 < self.u0 < 1.0:
            raise DomainError(f"kink velocity must satisfy -1 < u0 < 1, got {self.u0}")
        if self.polarity not in (1, -1):
            raise DomainError(f"polarity must be +1 or -1, got {self.polarity}")

    @property
    def width(self) -> float:
        """Lorentz-contracted width sqrt(1 - u0**2)."""
        return math.sqrt(1.0 - self.u0 * self.u0)

    def argument(self, xi, tau):
        return (np.asarray(xi, dtype=float) - self.u0 * tau - self.xi0) / self.width


def kink_phase(xi, tau, k: KinkSpec):
    """Phase 4*arctan(exp(+-theta)) of the free kink.

    Evaluated as ``pi +- 4*arctan(tanh(theta/2))`` which is identical but never
    overflows in the tails.
    """
    theta = k.argument(xi, tau)
    return np.pi + k.polarity * 4.0 * np.arctan(np.tanh(0.5 * theta))


def kink_phase_rate(xi, tau, k: KinkSpec):
    """Exact time derivative d(phi)/d(tau) of :func:`kink_phase`."""
    theta = k.argument(xi, tau)
    return -k.polarity * 2.0 * k.u0 / k.width * sech(theta)


def kink_voltage(xi, tau, k: KinkSpec, d: DerivedParams):
    """SFQ voltage pulse in volts, ``-phi0 * omega_p * dphi/dtau``.

    The peak is ``(hbar*omega_p/e) * u0/sqrt(1-u0**2)`` at the centroid and the
    time integral at any fixed position is one flux quantum, 2*pi*phi0.
    """
    return -PHI0 * d.omega_p * kink_phase_rate(xi, tau, k)


def coupling_profile(t, k: KinkSpec, d: DerivedParams):
    """Transverse drive g_c(t) (rad/s) seen by a transmon sitting at xi = 0.

    ``k.xi0`` is the kink centroid at t = 0 measured from the transmon, so the
    peak arrives at ``t = -xi0/(u0*omega_p)``.
    """
    c = d.circuit
    a = k.u0 * d.omega_p / k.width
    amp = math.sqrt(2.0) * d.n0_tr * (c.C_c / c.C_Sigma) * a
    return k.polarity * amp * sech((k.u0 * d.omega_p * np.asarray(t, dtype=float) + k.xi0) / k.width)


def coupling_peak(u0: float, d: DerivedParams) -> float:
    """max |g_c| for a kink of velocity u0."""
    c = d.circuit
    return math.sqrt(2.0) * d.n0_tr * (c.C_c / c.C_Sigma) * abs(u0) * d.omega_p / math.sqrt(1 - u0 * u0)
