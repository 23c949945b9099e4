"""Circuit parameters of the JTL + transmon system and everything derived from them.

All inputs are SI.  :func:`derive` is the single place where SI quantities are
turned into the dimensionless numbers used by the kink, PDE and ODE code.

Frequencies named ``omega_*`` are angular (rad/s).  The plasma frequency of
the line is therefore ~3.6e11 s^-1 for the default circuit, which makes the
natural time unit ``1/omega_p`` about 2.8 ps.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass
from typing import Any, Mapping

from scipy import constants as _const

from .errors import DomainError, RegimeError

HBAR = _const.hbar
E_CHARGE = _const.e
PLANCK = _const.h
#: reduced flux quantum hbar / 2e (Wb)
PHI0 = HBAR / (2.0 * E_CHARGE)

#: smallest E_J/E_C accepted as "transmon regime"
MIN_EJ_OVER_EC = 20.0
#: coupling constants at or above this are outside the perturbative regime
MAX_ETA = 0.1


@dataclass(frozen=True)
class CircuitParams:
    """Physical circuit constants (SI units).

    The defaults reproduce the reference circuit: a 1 mm long JTL with
    ell = 1.8 uH/m, c_J = 30 nF/m, i_c = 1.25 A/m, a 100 fF / 20 nA transmon
    and a 10 fF coupling capacitor.  ``alpha`` is the dimensionless damping
    coefficient of the line and ``R_in``/``L_in`` its far-end termination.
    """

    ell: float = 1.8e-6
    c_J: float = 3.0e-8
    i_c: float = 1.25
    C_Sigma: float = 100e-15
    I_c_tr: float = 20e-9
    C_c: float = 10e-15
    alpha: float = 1.0e-6
    R_in: float = 50.0
    L_in: float = 0.0
    l: float = 1.0e-3

    def __post_init__(self):
        bad = self.problems()
        if bad:
            raise DomainError("; ".join(bad))

    def problems(self) -> list[str]:
        """Return human-readable descriptions of every violated invariant."""
        out = []
        for name in ("ell", "c_J", "i_c", "C_Sigma", "I_c_tr", "C_c", "l"):
            value = getattr(self, name)
            if not _is_finite(value) or value <= 0:
                out.append(f"{name} must be a finite number > 0 (got {value!r})")
        for name in ("alpha", "R_in", "L_in"):
            value = getattr(self, name)
            if not _is_finite(value) or value < 0:
                out.append(f"{name} must be a finite number >= 0 (got {value!r})")
        return out

    def replace(self, **changes) -> "CircuitParams":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict[str, float]:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> "CircuitParams":
        """Build from a flat mapping of field name -> SI value.

        Missing keys take the defaults; unknown keys raise :class:`DomainError`.
        """
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(doc) - names)
        if unknown:
            raise DomainError(f"unknown circuit parameter(s): {', '.join(unknown)}")
        return cls(**{k: float(v) for k, v in doc.items()})

    @classmethod
    def from_json(cls, text: str) -> "CircuitParams":
        return cls.from_dict(json.loads(text))


def _is_finite(x) -> bool:
    try:
        return math.isfinite(x)
    except TypeError:
        return False


@dataclass(frozen=True)
class DerivedParams:
    """Derived and dimensionless quantities for a :class:`CircuitParams`.

    Use :func:`derive` to construct.  ``circuit`` keeps the originating
    parameters so downstream code can reach C_c, C_Sigma, etc.
    """

    circuit: CircuitParams
    lambda_J: float  # m
    omega_p: float  # rad/s
    c_bar: float  # m/s
    Z_J: float  # Ohm
    g_J: float  # S/m, subgap conductance per length matching circuit.alpha
    E_C_tr: float  # J
    E_J_tr: float  # J
    omega_tr: float  # rad/s
    omega_q: float  # rad/s
    phi0_tr: float
    n0_tr: float
    p: float
    eta_bare: float  # C_c^2 / (lambda_J c_J C_Sigma)
    eta_c: float

    @property
    def time_unit(self) -> float:
        """Seconds per unit of dimensionless time (1/omega_p)."""
        return 1.0 / self.omega_p

    @property
    def voltage_unit(self) -> float:
        """Volts per unit of dimensionless voltage (phi0 * omega_p)."""
        return PHI0 * self.omega_p

    @property
    def ej_over_ec(self) -> float:
        return self.E_J_tr / self.E_C_tr

    def to_dict(self) -> dict[str, Any]:
        out = {f.name: getattr(self, f.name) for f in dataclasses.fields(self)}
        out["circuit"] = self.circuit.to_dict()
        out["omega_p_over_2pi_Hz"] = self.omega_p / (2 * math.pi)
        out["omega_q_over_2pi_Hz"] = self.omega_q / (2 * math.pi)
        out["E_C_tr_over_h_Hz"] = self.E_C_tr / PLANCK
        out["E_J_tr_over_h_Hz"] = self.E_J_tr / PLANCK
        return out

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def derive(params: CircuitParams) -> DerivedParams:
    """Compute every derived quantity and check the perturbative regime.

    Raises
    ------
    RegimeError
        If E_J/E_C < 20 (not a transmon) or eta_c >= 0.1 (coupling too strong
        for the perturbative treatment of the kink).
    """
    ell, c_J, i_c = params.ell, params.c_J, params.i_c
    lambda_J = math.sqrt(PHI0 / (ell * i_c))
    omega_p = math.sqrt(i_c / (PHI0 * c_J))
    c_bar = 1.0 / math.sqrt(ell * c_J)
    Z_J = math.sqrt(ell / c_J)
    # alpha = g_J sqrt(phi0/(i_c c_J)) = g_J / (omega_p c_J)
    g_J = params.alpha * omega_p * c_J

    E_C = E_CHARGE**2 / (2.0 * params.C_Sigma)
    E_J = PHI0 * params.I_c_tr
    if E_J / E_C < MIN_EJ_OVER_EC:
        raise RegimeError(
            f"E_J/E_C = {E_J / E_C:.3g} < {MIN_EJ_OVER_EC:g}: not in the transmon regime"
        )
    omega_tr = math.sqrt(8.0 * E_J * E_C) / HBAR
    omega_q = (HBAR * omega_tr - E_C) / HBAR
    phi0_tr = (8.0 * E_C / E_J) ** 0.25
    n0_tr = (E_J / (8.0 * E_C)) ** 0.25
    p = math.sqrt(E_C / (8.0 * E_J))

    eta_bare = params.C_c**2 / (lambda_J * c_J * params.C_Sigma)
    eta_c = eta_bare / (1.0 - p)
    if eta_c >= MAX_ETA:
        raise RegimeError(f"eta_c = {eta_c:.3g} >= {MAX_ETA:g}: coupling not perturbative")

    return DerivedParams(
        circuit=params,
        lambda_J=lambda_J,
        omega_p=omega_p,
        c_bar=c_bar,
        Z_J=Z_J,
        g_J=g_J,
        E_C_tr=E_C,
        E_J_tr=E_J,
        omega_tr=omega_tr,
        omega_q=omega_q,
        phi0_tr=phi0_tr,
        n0_tr=n0_tr,
        p=p,
        eta_bare=eta_bare,
        eta_c=eta_c,
    )


def transmon_level_energy(n: int, d: DerivedParams) -> float:
    """Energy (J) of the n-th transmon level, ``hbar*omega_tr*n - E_C*n*(n+1)/2``."""
    if n < 0:
        raise DomainError(f"level index must be >= 0, got {n}")
    return HBAR * d.omega_tr * n - 0.5 * d.E_C_tr * n * (n + 1)


def level_frequency(n: int, d: DerivedParams) -> float:
    """Angular frequency (E_n - E_{n-1})/hbar of the n-1 <-> n transition."""
    if n < 1:
        raise DomainError(f"transition frequency needs n >= 1, got {n}")
    return (transmon_level_energy(n, d) - transmon_level_energy(n - 1, d)) / HBAR


def eta_multilevel(n: int, d: DerivedParams) -> float:
    """Signed coupling constant felt by the kink when the transmon is in |n>.

    Negative by construction: ``-eta_bare / ((1 - n p)(1 - (n+1) p))``.
    """
    p = d.p
    if n < 0:
        raise DomainError(f"level index must be >= 0, got {n}")
    if (n + 1) * p >= 1.0:
        raise DomainError(f"(n+1)p = {(n + 1) * p:.3g} >= 1 for n={n}")
    return -d.eta_bare / ((1.0 - n * p) * (1.0 - (n + 1) * p))


def sw_validity_ratio(n: int, p: float) -> float:
    r"""Ratio Q(n) = L(n)/R(n) controlling the neglected off-diagonal SW term.

    L(n) = (1-(n+2)p) / (p(1-np)),  R(n) = sqrt((n+1)(n+2))/2.
    Values >= 10 mean the two-photon off-diagonal coupling can be dropped.
    """
    if n < 0:
        raise DomainError(f"level index must be >= 0, got {n}")
    if (n + 2) * p >= 1.0:
        raise DomainError(f"(n+2)p = {(n + 2) * p:.3g} >= 1 for n={n}")
    if p == 0:
        return math.inf
    left = (1.0 - (n + 2) * p) / (p * (1.0 - n * p))
    right = 0.5 * math.sqrt((n + 1) * (n + 2))
    return left / right
