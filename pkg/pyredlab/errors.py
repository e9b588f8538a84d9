"""Exception hierarchy of pyredlab.

The command line maps ConfigurationError to exit code 1 and every other
RedlabError to exit code 2.
"""

# This file is part of pyredlab.
#
# License: BSD 2-clause license


class RedlabError(Exception):
    """Base class of all errors raised by pyredlab."""


class ConfigurationError(RedlabError, ValueError):
    """Invalid input data, e.g. a malformed config file or topology.

    Parameters
    ----------
    message : str
        human-readable diagnostic
    field : str, optional
        dotted path of the offending field, e.g. ``sim.dispatch``
    """

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field

    def __str__(self):
        message = super().__str__()
        if self.field is None:
            return message
        return "{}: {}".format(self.field, message)


class TopologyError(ConfigurationError):
    """A topology violates one of its invariants."""


class StabilityError(RedlabError):
    """A stability computation cannot be carried out for the given input."""


class FluidError(RedlabError):
    """The fluid model does not apply to the given input."""


class SimulationError(RedlabError):
    """A simulation could not be set up or carried out."""


class DominanceViolation(SimulationError):
    """A coupled bound system was overtaken by the original system.

    Parameters
    ----------
    violation : BoundViolation
        the first violating event
    """

    def __init__(self, violation):
        super().__init__(
            "{} bound violated at t={!r} (event {}): type {} has {} jobs in "
            "the original system and {} in the bound system".format(
                violation.bound, violation.time, violation.event,
                violation.job_type, violation.original, violation.bound_jobs))
        self.violation = violation
