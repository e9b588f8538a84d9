"""Configuration of a single simulation run."""

# This file is part of pyredlab.
#
# License: BSD 2-clause license

#
# Imports
#

from dataclasses import dataclass, field, replace
from enum import Enum, unique

from ..data_model import CapacityModulation, ServiceDistribution, Topology
from ..errors import ConfigurationError


DEFAULT_BUSY_PERIODS = 100000
DEFAULT_WARMUP_PERIODS = 100
DEFAULT_MAX_EVENTS = 10 ** 8
DEFAULT_SEED = 0

SIM_KEYS = frozenset(("dispatch", "scheduling", "service", "modulation",
                      "variant", "seed", "busy_periods", "warmup_periods",
                      "max_events", "initial_state", "bound_stage"))
"""keys accepted in a ``sim`` block"""


@unique
class Dispatch(Enum):
    """Where the copies of an arriving job go."""
    redundancy = "redundancy"
    """one identical copy on every compatible server"""
    bernoulli = "bernoulli"
    """a single copy on a uniformly chosen compatible server"""
    jsq = "jsq"
    """a single copy on the compatible server with the fewest jobs"""


@unique
class Scheduling(Enum):
    """Service discipline inside a server."""
    ps = "ps"
    fcfs = "fcfs"
    ros = "ros"


@unique
class Variant(Enum):
    """Original system or one of its coupled bound systems."""
    original = "original"
    upper_bound = "upper_bound"
    lower_bound = "lower_bound"


def _parse_enum(enum_class, raw, name):
    if isinstance(raw, enum_class):
        return raw
    try:
        return enum_class(raw)
    except ValueError:
        raise ConfigurationError(
            "unknown value {!r}, expected one of {}".format(
                raw, [member.value for member in enum_class]),
            field="sim." + name) from None


def _positive_int(raw, name, minimum=1):
    if isinstance(raw, bool) or not isinstance(raw, int) or raw < minimum:
        raise ConfigurationError(
            "must be an integer >= {}, got {!r}".format(minimum, raw),
            field="sim." + name)
    return raw


#
# Definition of class SimConfig
#


@dataclass(frozen=True)
class SimConfig:
    """Everything needed to reproduce one simulation run."""

    topology: Topology
    dispatch: Dispatch = Dispatch.redundancy
    scheduling: Scheduling = Scheduling.ps
    service: ServiceDistribution = field(
        default_factory=ServiceDistribution.exponential)
    modulation: CapacityModulation = None
    variant: Variant = Variant.original
    seed: int = DEFAULT_SEED
    busy_periods: int = DEFAULT_BUSY_PERIODS
    """number of regeneration cycles that enter the estimate"""
    warmup_periods: int = DEFAULT_WARMUP_PERIODS
    """cycles discarded before measuring"""
    max_events: int = DEFAULT_MAX_EVENTS
    """divergence guard"""
    initial_state: tuple = None
    """jobs per type present at time 0, in type order"""
    bound_stage: int = None
    """stage the lower-bound system is built on"""

    def __post_init__(self):
        object.__setattr__(self, "dispatch",
                           _parse_enum(Dispatch, self.dispatch, "dispatch"))
        object.__setattr__(self, "scheduling", _parse_enum(
            Scheduling, self.scheduling, "scheduling"))
        object.__setattr__(self, "variant",
                           _parse_enum(Variant, self.variant, "variant"))
        _positive_int(self.seed, "seed", minimum=0)
        _positive_int(self.busy_periods, "busy_periods")
        _positive_int(self.warmup_periods, "warmup_periods", minimum=0)
        _positive_int(self.max_events, "max_events")
        if self.initial_state is not None:
            state = tuple(self.initial_state)
            if len(state) != len(self.topology.types):
                raise ConfigurationError(
                    "expected {} counts, got {}".format(
                        len(self.topology.types), len(state)),
                    field="sim.initial_state")
            for count in state:
                _positive_int(count, "initial_state", minimum=0)
            object.__setattr__(self, "initial_state", state)
        if self.variant is not Variant.original:
            if self.dispatch is not Dispatch.redundancy:
                raise ConfigurationError(
                    "bound variants need redundancy dispatch",
                    field="sim.variant")
            if self.scheduling is not Scheduling.ps:
                raise ConfigurationError(
                    "bound variants need PS scheduling", field="sim.variant")
            if self.modulation is not None:
                raise ConfigurationError(
                    "bound variants do not support modulation",
                    field="sim.variant")
        if self.bound_stage is not None:
            _positive_int(self.bound_stage, "bound_stage")

    @property
    def lam(self):
        return self.topology.lam

    def replace(self, **changes):
        """copy with some fields changed"""
        return replace(self, **changes)

    def to_dict(self):
        """JSON representation of the ``sim`` block plus the topology"""
        result = {
            "topology": self.topology.to_dict(),
            "dispatch": self.dispatch.value,
            "scheduling": self.scheduling.value,
            "service": self.service.to_dict(),
            "variant": self.variant.value,
            "seed": self.seed,
            "busy_periods": self.busy_periods,
            "warmup_periods": self.warmup_periods,
            "max_events": self.max_events,
        }
        if self.modulation is not None:
            result["modulation"] = self.modulation.to_dict()
        if self.initial_state is not None:
            result["initial_state"] = list(self.initial_state)
        if self.bound_stage is not None:
            result["bound_stage"] = self.bound_stage
        return result

    @classmethod
    def from_dict(cls, raw, topology):
        """Build a config from a ``sim`` block.

        Parameters
        ----------
        raw : dict
            the ``sim`` block; every key is optional
        topology : Topology
            parsed separately (inline or from a file)
        """
        if not isinstance(raw, dict):
            raise ConfigurationError("must be a JSON object", field="sim")
        unknown = set(raw) - SIM_KEYS
        if unknown:
            raise ConfigurationError(
                "unknown key(s) {}".format(sorted(unknown)), field="sim")
        kwargs = {key: raw[key] for key in ("dispatch", "scheduling",
                                            "variant", "seed",
                                            "busy_periods", "warmup_periods",
                                            "max_events", "initial_state",
                                            "bound_stage") if key in raw}
        if "service" in raw:
            kwargs["service"] = ServiceDistribution.from_dict(
                raw["service"], field_prefix="sim.service")
        if raw.get("modulation") is not None:
            try:
                kwargs["modulation"] = CapacityModulation.from_dict(
                    raw["modulation"])
            except ConfigurationError as error:
                error.field = "sim." + error.field
                raise
        return cls(topology, **kwargs)
