"""Exception hierarchy shared by all modules."""


class FluxDelayError(Exception):
    """Base class for every error raised by :mod:`fluxdelay`."""


class DomainError(FluxDelayError, ValueError):
    """An argument lies outside the domain where a formula is defined."""


class RegimeError(FluxDelayError, ValueError):
    """Parameters violate the assumptions of a perturbative/approximate result."""


class RangeError(FluxDelayError, ArithmeticError):
    """A kink velocity reached the light-cone bound |u| -> 1."""


class StabilityError(FluxDelayError, ArithmeticError):
    """The field integrator blew up."""


class NoKinkError(FluxDelayError, ValueError):
    """No single kink could be located in a field state."""


class NoCrossingError(FluxDelayError, ValueError):
    """A trajectory never crossed the requested probe position."""


class SingularityError(FluxDelayError, ZeroDivisionError):
    """Evaluation requested exactly at a singular point (e.g. the gap edge)."""


class ConfigError(FluxDelayError, ValueError):
    """A scenario configuration document failed validation.

    All violations are collected in :attr:`problems` rather than reporting
    only the first one.
    """

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))
