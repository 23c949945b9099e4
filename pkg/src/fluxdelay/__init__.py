"""Fluxon-based qubit readout: kink dynamics, arrival-time delays and line-induced decay."""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    DomainError,
    FluxDelayError,
    NoCrossingError,
    NoKinkError,
    RangeError,
    RegimeError,
    SingularityError,
    StabilityError,
)
from .params import CircuitParams, DerivedParams, derive, eta_multilevel, level_frequency, sw_validity_ratio
from .kink import KinkSpec, coupling_peak, coupling_profile, kink_phase, kink_phase_rate, kink_voltage
from .ode import KinkState, PerturbationSpec, integrate, integrate_to, measure_delay, steady_state_velocity
from .analytics import (
    pinning_report,
    separation_condition,
    time_delay_multilevel,
    time_delay_qubit,
    transition_probability_multilevel,
    transition_probability_qubit,
)
from .kgtl import DecaySpec, decay_rate, impedance

__all__ = [name for name in dir() if not name.startswith("_")]
