"""JSON configuration files of the command line.

A config file holds a topology (inline or as a path relative to the file)
and at most one command block: ``sim``, ``sweep`` or ``fluid``. Sweeps
build their own topologies and need no ``topology`` entry.
"""

# This file is part of pyredlab.
#
# License: BSD 2-clause license

import json
from dataclasses import dataclass
from pathlib import Path

from .data_model import Topology
from .errors import ConfigurationError, TopologyError
from .experiments import SweepSpec
from .runners import SimConfig


CONFIG_KEYS = frozenset(("topology", "sim", "sweep", "fluid"))
COMMAND_BLOCKS = ("sim", "sweep", "fluid")
FLUID_KEYS = frozenset(("initial_mass", "initial_types", "horizon"))


@dataclass(frozen=True)
class FluidBlock:
    """Initial condition and horizon of a fluid computation."""

    initial_mass: tuple = None
    """copy mass per server"""
    initial_types: tuple = None
    """job mass per type"""
    horizon: float = None

    def __post_init__(self):
        if (self.initial_mass is None) == (self.initial_types is None):
            raise ConfigurationError(
                "give exactly one of 'initial_mass' and 'initial_types'",
                field="fluid")
        if self.horizon is not None and not self.horizon > 0:
            raise ConfigurationError("must be positive",
                                     field="fluid.horizon")

    @classmethod
    def from_dict(cls, raw):
        if not isinstance(raw, dict):
            raise ConfigurationError("must be a JSON object", field="fluid")
        unknown = set(raw) - FLUID_KEYS
        if unknown:
            raise ConfigurationError(
                "unknown key(s) {}".format(sorted(unknown)), field="fluid")
        return cls(*(tuple(raw[key]) if raw.get(key) is not None else None
                     for key in ("initial_mass", "initial_types")),
                   raw.get("horizon"))


@dataclass(frozen=True)
class ConfigFile:
    """A parsed configuration file."""

    topology: Topology = None
    sim: SimConfig = None
    sweep: SweepSpec = None
    fluid: FluidBlock = None
    raw_sim: dict = None
    """the ``sim`` block as written, for re-parsing with overrides"""

    @classmethod
    def from_dict(cls, raw, base_dir="."):
        if not isinstance(raw, dict):
            raise ConfigurationError("config must be a JSON object")
        unknown = set(raw) - CONFIG_KEYS
        if unknown:
            raise ConfigurationError(
                "unknown key(s) {}".format(sorted(unknown)), field="config")
        blocks = [name for name in COMMAND_BLOCKS if name in raw]
        if len(blocks) > 1:
            raise ConfigurationError(
                "at most one of {} may be given, found {}".format(
                    list(COMMAND_BLOCKS), blocks), field="config")
        topology = None
        if "topology" in raw:
            topology = _topology(raw["topology"], Path(base_dir))
        elif "sweep" not in raw:
            raise ConfigurationError("missing key", field="topology")
        sim = raw_sim = sweep = fluid = None
        if "sim" in raw:
            raw_sim = raw["sim"]
            sim = SimConfig.from_dict(raw_sim, topology)
        if "sweep" in raw:
            sweep = SweepSpec.from_dict(raw["sweep"])
        if "fluid" in raw:
            fluid = FluidBlock.from_dict(raw["fluid"])
        return cls(topology, sim, sweep, fluid, raw_sim)

    @classmethod
    def load(cls, path):
        """Read and validate a config file.

        Raises
        ------
        OSError
            if the file cannot be read
        json.JSONDecodeError
            on malformed JSON
        ConfigurationError
            on invalid content
        """
        path = Path(path)
        with open(path) as config_file:
            raw = json.load(config_file)
        return cls.from_dict(raw, path.parent)

    def sim_config(self, **overrides):
        """SimConfig of the ``sim`` block (defaults if absent)"""
        if self.topology is None:
            raise ConfigurationError("missing key", field="topology")
        config = self.sim or SimConfig(self.topology)
        changes = {key: value for key, value in overrides.items()
                   if value is not None}
        if "lam" in changes:
            changes["topology"] = config.topology.with_arrival_rate(
                changes.pop("lam"))
        return config.replace(**changes) if changes else config


def _topology(raw, base_dir):
    """inline topology or path relative to the config file"""
    if isinstance(raw, str):
        path = base_dir / raw
        try:
            with open(path) as topology_file:
                raw = json.load(topology_file)
        except OSError as error:
            raise TopologyError("cannot read {}: {}".format(
                path, error.strerror), field="topology") from error
    return Topology.from_dict(raw)
