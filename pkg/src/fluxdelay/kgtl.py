"""Linearised (Klein-Gordon) transmission line: impedance and qubit decay.

Without a fluxon the JTL behaves as a gapped transmission line.  Its input
impedance Z(x) obeys the Riccati equation

    dZ/dx + X0 Z^2 = i omega ell,     X0 = g_J - i omega c_J (omega_p^2/omega^2 - 1)

with Z(0) = Z0 = R_in + i omega L_in at the terminated end.  The solution is
written as ``lam0 (1 + rho e^{-2kx}) / (1 - rho e^{-2kx})`` with
``k = lam0 X0`` on the branch Re k >= 0, so no growing exponential is formed.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, RegimeError, SingularityError
from .params import DerivedParams, PHI0


@dataclass(frozen=True)
class DecaySpec:
    """Termination and geometry of the line seen by the transmon.

    ``half_length`` is the line length between the termination and the
    coupling capacitor (half the full JTL length).  ``alpha`` is the
    dimensionless damping; the matching conductance per length is
    ``alpha * omega_p * c_J``.
    """

    d: DerivedParams
    R_in: float = 50.0
    L_in: float = 0.0
    half_length: float = 0.5e-3
    alpha: float = 0.0

    def __post_init__(self):
        if not self.half_length > 0:
            raise DomainError("half_length must be > 0")
        if self.R_in < 0 or self.L_in < 0 or self.alpha < 0:
            raise DomainError("R_in, L_in and alpha must be >= 0")

    @classmethod
    def from_params(cls, d: DerivedParams, **overrides) -> "DecaySpec":
        c = d.circuit
        kw = dict(R_in=c.R_in, L_in=c.L_in, half_length=0.5 * c.l, alpha=c.alpha)
        kw.update(overrides)
        return cls(d, **kw)

    @property
    def g_J(self) -> float:
        c = self.d.circuit
        # inverse of alpha = g_J * sqrt(phi0 / (i_c c_J))
        return self.alpha / math.sqrt(PHI0 / (c.i_c * c.c_J))

    @property
    def length(self) -> float:
        return 2.0 * self.half_length

    def z0(self, omega: float) -> complex:
        return complex(self.R_in, omega * self.L_in)


def _line_constants(omega: float, spec: DecaySpec):
    d = spec.d
    c = d.circuit
    if not omega > 0:
        raise DomainError(f"omega must be > 0, got {omega}")
    if math.isclose(omega, d.omega_p, rel_tol=1e-12):
        raise SingularityError("impedance evaluated at the gap edge omega = omega_p")
    x0 = complex(spec.g_J, -omega * c.c_J * (d.omega_p**2 / omega**2 - 1.0))
    lam0 = cmath.sqrt(complex(0.0, omega * c.ell) / x0)
    k = lam0 * x0
    if k.real < 0:
        lam0, k = -lam0, -k
    return x0, lam0, k


def effective_impedance(omega: float, d: DerivedParams) -> float:
    """Z_J / sqrt(omega_p^2/omega^2 - 1), the magnitude of the evanescent line impedance."""
    if not 0 < omega < d.omega_p:
        raise DomainError("effective impedance is defined for 0 < omega < omega_p")
    return d.Z_J / math.sqrt(d.omega_p**2 / omega**2 - 1.0)


def impedance(x: float, omega: float, spec: DecaySpec) -> complex:
    """Impedance (Ohm) of a line section of length ``x`` (m) terminated by Z0.

    Raises
    ------
    SingularityError
        At omega == omega_p.
    """
    if x < 0:
        raise DomainError("length must be >= 0")
    _, lam0, k = _line_constants(omega, spec)
    z0 = spec.z0(omega)
    if z0 == -lam0:
        return -lam0
    rho = (z0 - lam0) / (z0 + lam0)
    q = rho * cmath.exp(-2.0 * k * x)
    return lam0 * (1.0 + q) / (1.0 - q)


def decay_rate(omega_q: float, spec: DecaySpec) -> float:
    """Radiative decay rate (1/s) of a transmon coupled through C_c to the line end.

    ``Re[1/Z_eff]/C_Sigma`` with ``Z_eff = Z(l/2) - i/(omega C_c)``.
    """
    c = spec.d.circuit
    if not 0 < omega_q < spec.d.omega_p:
        raise DomainError("decay rate needs 0 < omega_q < omega_p")
    z = impedance(spec.half_length, omega_q, spec)
    re = z.real
    im = z.imag - 1.0 / (omega_q * c.C_c)
    return re / (re * re + im * im) / c.C_Sigma


def decay_rate_dissipationless_approx(omega_q: float, spec: DecaySpec) -> float:
    """Leading-order rate of a lossless line, exponentially small in l/lambda_J.

    ``4 omega_q^2 (C_c^2/C_Sigma) Z~^2/R_in exp(-l/lambda_J)``, valid for
    L_in = 0 and Z~ much smaller than both R_in and 1/(omega_q C_c).
    """
    d = spec.d
    c = d.circuit
    if spec.alpha != 0 or spec.L_in != 0:
        raise RegimeError("dissipationless approximation needs alpha = 0 and L_in = 0")
    zt = effective_impedance(omega_q, d)
    if not (10 * zt <= spec.R_in and 10 * zt * omega_q * c.C_c <= 1.0):
        raise RegimeError("line impedance not small against R_in and 1/(omega C_c)")
    return 4.0 * omega_q**2 * c.C_c**2 / c.C_Sigma * zt**2 / spec.R_in * math.exp(-spec.length / d.lambda_J)


def decay_rate_underdamped_approx(omega_q: float, spec: DecaySpec) -> float:
    """Rate through the subgap conductance, ``alpha omega_q^3/(2 omega_p) (C_c^2/C_Sigma) Z~``.

    Independent of the termination and the line length.
    """
    d = spec.d
    c = d.circuit
    if spec.alpha >= 0.1:
        raise RegimeError(f"alpha = {spec.alpha} is not underdamped")
    zt = effective_impedance(omega_q, d)
    return spec.alpha * omega_q**3 / (2.0 * d.omega_p) * c.C_c**2 / c.C_Sigma * zt


def dispersion(k, d: DerivedParams):
    """omega(k) = sqrt(omega_p^2 + c_bar^2 k^2)."""
    k = np.asarray(k, dtype=float)
    out = np.sqrt(d.omega_p**2 + (d.c_bar * k) ** 2)
    return float(out) if out.ndim == 0 else out


def wavenumbers_at(omega: float, d: DerivedParams) -> list[float]:
    """Real wavenumbers (>= 0) with dispersion(k) == omega; empty inside the gap."""
    if omega < d.omega_p:
        return []
    return [math.sqrt(omega**2 - d.omega_p**2) / d.c_bar]
