"""Parameter sweeps of the mean number of jobs.

A SweepSpec expands into points (one topology each). Every point gets the
three frontiers lambda_R, lambda_B and lambda_J, and for every arrival
rate of the grid one simulation per requested (dispatch, scheduling)
policy. Simulations run in a multiprocessing pool; the rows are sorted
before they are returned, so the output does not depend on the order in
which the workers finish.
"""

# This file is part of pyredlab.
#
# License: BSD 2-clause license

#
# Imports
#

import csv
import json
import logging
from dataclasses import dataclass, field
from enum import Enum, unique
from multiprocessing import Pool
from pathlib import Path

from ..data_model import (CapacityModulation, ServiceDistribution,
                          geometric_capacities, linear_capacities,
                          make_nested, make_red_d)
from ..data_model.generators import NESTED_SERVER_COUNTS
from ..errors import ConfigurationError
from ..runners import Dispatch, Scheduling, SimConfig, run
from ..stability import lambda_B, lambda_J, lambda_R
from ..util import format_number, rounded, threads_from_environment


logger = logging.getLogger(__name__)

DEFAULT_BUSY_PERIODS = 100000
DEFAULT_WARMUP_PERIODS = 100
DEFAULT_MAX_EVENTS = 10 ** 7
DEFAULT_POLICIES = (("redundancy", "ps"), ("bernoulli", "ps"), ("jsq", "ps"))
DEFAULT_W_CAPACITIES = (1.0, 2.0)
DEFAULT_W_P1 = 0.35
DEFAULT_EPSILON = 1.0
DOLLY_MODELS = {"red2": (5, 2), "red4": (5, 4), "W": None}
"""models of the modulated sweep: unit capacities, uniform types"""

SWEEP_KEYS = frozenset((
    "family", "num_servers", "d", "mu", "M", "models", "lambdas", "p12",
    "p1", "probs", "mu2", "capacities", "policies", "service", "epsilon",
    "seed", "busy_periods", "warmup_periods", "max_events", "max_ci"))

SORT_COLUMNS = ("model", "K", "d", "value", "lambda", "dispatch",
                "scheduling")

ROW_COLUMNS = ("family", "model", "K", "d", "parameter", "value", "lambda",
               "dispatch", "scheduling", "lambda_R", "lambda_B", "lambda_J",
               "mean_jobs", "ci_half_width", "diverged", "ci_flagged",
               "cycles", "seed")


@unique
class SweepFamily(Enum):
    """Families of topologies a sweep can walk through."""
    red_d_geometric = "red_d_geometric"
    red_d_linear = "red_d_linear"
    nested_geometric = "nested_geometric"
    nested_linear = "nested_linear"
    w_model_p12_sweep = "w_model_p12_sweep"
    w_model_mu2_sweep = "w_model_mu2_sweep"
    dolly_modulated = "dolly_modulated"


@dataclass(frozen=True)
class SweepPoint:
    """One topology of a sweep."""

    model: str
    num_servers: int
    d: int
    parameter: str
    value: float
    topology: object


def _grid(raw, name):
    values = tuple(raw)
    if not values:
        raise ConfigurationError("grid must not be empty",
                                 field="sweep." + name)
    return values


#
# Definition of class SweepSpec
#


@dataclass(frozen=True)
class SweepSpec:
    """What to sweep over and how to simulate each point."""

    family: SweepFamily
    num_servers: tuple = (4,)
    d: tuple = (2,)
    mu: tuple = (1.0, 1.2, 1.4, 2.0)
    """geometric capacity ratios"""
    M: tuple = (1.0, 2.0, 4.0)
    """upper ends of linear capacities"""
    models: tuple = ("W",)
    """nested models, or keys of DOLLY_MODELS for the modulated sweep"""
    lambdas: tuple = ()
    """arrival rates to simulate; empty means frontiers only"""
    p12: tuple = (0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6)
    p1: float = DEFAULT_W_P1
    """probability of type {1} in the p12 sweep"""
    probs: tuple = (0.35, 0.4, 0.25)
    """(p1, p2, p12) of the mu2 sweep"""
    mu2: tuple = (1.0, 2.0, 4.0, 8.0)
    capacities: tuple = DEFAULT_W_CAPACITIES
    """(mu1, mu2) of the p12 sweep"""
    policies: tuple = DEFAULT_POLICIES
    """(dispatch, scheduling) pairs"""
    service: ServiceDistribution = field(
        default_factory=ServiceDistribution.exponential)
    epsilon: float = DEFAULT_EPSILON
    """mean time between capacity changes (modulated sweep)"""
    seed: int = 0
    busy_periods: int = DEFAULT_BUSY_PERIODS
    warmup_periods: int = DEFAULT_WARMUP_PERIODS
    max_events: int = DEFAULT_MAX_EVENTS
    max_ci: float = None
    """rows with a larger CI half-width are flagged"""

    def __post_init__(self):
        if not isinstance(self.family, SweepFamily):
            try:
                object.__setattr__(self, "family", SweepFamily(self.family))
            except ValueError:
                raise ConfigurationError(
                    "unknown family {!r}".format(self.family),
                    field="sweep.family") from None
        for name in ("num_servers", "d", "mu", "M", "models", "p12", "mu2"):
            object.__setattr__(self, name, _grid(getattr(self, name), name))
        object.__setattr__(self, "lambdas", tuple(self.lambdas))
        if any(lam < 0 for lam in self.lambdas):
            raise ConfigurationError("arrival rates must be non-negative",
                                     field="sweep.lambdas")
        policies = []
        for pair in _grid(self.policies, "policies"):
            try:
                dispatch, scheduling = pair
                policies.append((Dispatch(dispatch).value,
                                 Scheduling(scheduling).value))
            except (TypeError, ValueError):
                raise ConfigurationError(
                    "expected [dispatch, scheduling] pairs, got {!r}"
                    .format(pair), field="sweep.policies") from None
        object.__setattr__(self, "policies", tuple(policies))
        object.__setattr__(self, "probs", tuple(self.probs))
        object.__setattr__(self, "capacities", tuple(self.capacities))
        if self.lambdas and self.busy_periods < 1:
            raise ConfigurationError("must be positive",
                                     field="sweep.busy_periods")
        if self.max_ci is not None and self.max_ci <= 0:
            raise ConfigurationError("must be positive", field="sweep.max_ci")

    def points(self):
        """the topologies of the sweep, in a fixed order"""
        family = self.family
        points = []
        if family in (SweepFamily.red_d_geometric, SweepFamily.red_d_linear):
            geometric = family is SweepFamily.red_d_geometric
            for num_servers in self.num_servers:
                for d in self.d:
                    for value in (self.mu if geometric else self.M):
                        capacities = (geometric_capacities(num_servers, value)
                                      if geometric else
                                      linear_capacities(num_servers, value))
                        points.append(SweepPoint(
                            "red-{}".format(d), num_servers, d,
                            "mu" if geometric else "M", value,
                            make_red_d(num_servers, d, capacities)))
        elif family in (SweepFamily.nested_geometric,
                        SweepFamily.nested_linear):
            geometric = family is SweepFamily.nested_geometric
            for model in self.models:
                if model not in NESTED_SERVER_COUNTS:
                    raise ConfigurationError(
                        "unknown nested model {!r}".format(model),
                        field="sweep.models")
                num_servers = NESTED_SERVER_COUNTS[model]
                for value in (self.mu if geometric else self.M):
                    capacities = (geometric_capacities(num_servers, value)
                                  if geometric else
                                  linear_capacities(num_servers, value))
                    points.append(SweepPoint(
                        model, num_servers, None,
                        "mu" if geometric else "M", value,
                        make_nested(model, capacities)))
        elif family is SweepFamily.w_model_p12_sweep:
            for p12 in self.p12:
                p2 = 1.0 - self.p1 - p12
                if p2 < -1e-12:
                    raise ConfigurationError(
                        "p1 + p12 exceeds 1 for p12={}".format(p12),
                        field="sweep.p12")
                points.append(SweepPoint(
                    "W", 2, None, "p12", p12,
                    make_nested("W", self.capacities,
                                (self.p1, max(p2, 0.0), p12))))
        elif family is SweepFamily.w_model_mu2_sweep:
            for mu2 in self.mu2:
                points.append(SweepPoint(
                    "W", 2, None, "mu2", mu2,
                    make_nested("W", (1.0, mu2), self.probs)))
        else:
            for model in self.models:
                if model not in DOLLY_MODELS:
                    raise ConfigurationError(
                        "unknown modulated model {!r}, expected one of {}"
                        .format(model, sorted(DOLLY_MODELS)),
                        field="sweep.models")
                shape = DOLLY_MODELS[model]
                if shape is None:
                    topology = make_nested("W", (1.0, 1.0))
                    num_servers, d = 2, None
                else:
                    num_servers, d = shape
                    topology = make_red_d(num_servers, d,
                                          (1.0,) * num_servers)
                points.append(SweepPoint(model, num_servers, d, "epsilon",
                                         self.epsilon, topology))
        return points

    def to_dict(self):
        return {"family": self.family.value,
                "num_servers": list(self.num_servers), "d": list(self.d),
                "mu": list(self.mu), "M": list(self.M),
                "models": list(self.models), "lambdas": list(self.lambdas),
                "p12": list(self.p12), "p1": self.p1,
                "probs": list(self.probs), "mu2": list(self.mu2),
                "capacities": list(self.capacities),
                "policies": [list(pair) for pair in self.policies],
                "service": self.service.to_dict(), "epsilon": self.epsilon,
                "seed": self.seed, "busy_periods": self.busy_periods,
                "warmup_periods": self.warmup_periods,
                "max_events": self.max_events, "max_ci": self.max_ci}

    @classmethod
    def from_dict(cls, raw):
        """Parse a ``sweep`` block; only ``family`` is required."""
        if not isinstance(raw, dict):
            raise ConfigurationError("must be a JSON object", field="sweep")
        unknown = set(raw) - SWEEP_KEYS
        if unknown:
            raise ConfigurationError(
                "unknown key(s) {}".format(sorted(unknown)), field="sweep")
        if "family" not in raw:
            raise ConfigurationError("missing key", field="sweep.family")
        kwargs = {key: value for key, value in raw.items()
                  if key != "service"}
        if "service" in raw:
            kwargs["service"] = ServiceDistribution.from_dict(
                raw["service"], field_prefix="sweep.service")
        try:
            return cls(**kwargs)
        except TypeError as error:
            raise ConfigurationError(str(error), field="sweep") from error


def _known_frontier(dispatch, scheduling, frontiers):
    """frontier of a policy if it is known, else None"""
    if dispatch == "redundancy":
        return frontiers["lambda_R"] if scheduling == "ps" else None
    return frontiers["lambda_B" if dispatch == "bernoulli" else "lambda_J"]


def _simulate(task):
    """worker: run one configuration, return (row key, SimResult dict)"""
    key, config = task
    return key, run(config).to_dict()


def _tasks(spec, points):
    modulation = (CapacityModulation(spec.epsilon)
                  if spec.family is SweepFamily.dolly_modulated else None)
    rows, tasks = [], []
    for index, point in enumerate(points):
        topology = point.topology
        frontiers = {"lambda_R": lambda_R(topology),
                     "lambda_B": lambda_B(topology),
                     "lambda_J": lambda_J(topology)}
        base = {"family": spec.family.value, "model": point.model,
                "K": point.num_servers, "d": point.d,
                "parameter": point.parameter, "value": point.value}
        base.update(frontiers)
        if not spec.lambdas:
            rows.append(dict(base))
            continue
        for lam_index, lam in enumerate(spec.lambdas):
            for policy_index, (dispatch, scheduling) in enumerate(
                    spec.policies):
                seed = spec.seed + (index * len(spec.lambdas) + lam_index) \
                    * len(spec.policies) + policy_index
                row = dict(base, **{"lambda": lam, "dispatch": dispatch,
                                    "scheduling": scheduling, "seed": seed})
                frontier = _known_frontier(dispatch, scheduling, frontiers)
                # with modulation the frontiers of the unit system no longer
                # apply
                if modulation is None and frontier is not None \
                        and lam >= frontier:
                    row.update({"mean_jobs": None, "ci_half_width": None,
                                "diverged": True, "cycles": 0})
                    rows.append(row)
                    continue
                rows.append(row)
                config = SimConfig(
                    topology.with_arrival_rate(lam), dispatch, scheduling,
                    spec.service, modulation, seed=seed,
                    busy_periods=spec.busy_periods,
                    warmup_periods=spec.warmup_periods,
                    max_events=spec.max_events)
                tasks.append((len(rows) - 1, config))
    return rows, tasks


def _sort_key(row):
    key = []
    for column in SORT_COLUMNS:
        value = row.get(column)
        key.append((value is None, "" if value is None else value))
    return tuple(key)


def sweep_mean_jobs(spec, threads=None):
    """Run a sweep.

    Parameters
    ----------
    spec : SweepSpec
    threads : int, optional
        worker processes; defaults to REDLAB_THREADS or the CPU count

    Returns
    -------
    list of dict
        rows keyed by ROW_COLUMNS, sorted
    """
    points = spec.points()
    rows, tasks = _tasks(spec, points)
    threads = threads or threads_from_environment()
    logger.info("sweep %s: %d points, %d simulations on %d workers",
                spec.family.value, len(points), len(tasks), threads)
    if tasks:
        if threads > 1 and len(tasks) > 1:
            with Pool(min(threads, len(tasks))) as pool:
                results = pool.map(_simulate, tasks)
        else:
            results = [_simulate(task) for task in tasks]
        for key, result in results:
            rows[key].update({"mean_jobs": result["mean_jobs"],
                              "ci_half_width": result["ci_half_width"],
                              "diverged": result["diverged"],
                              "cycles": result["cycles"]})
    for row in rows:
        half_width = row.get("ci_half_width")
        if "mean_jobs" in row:
            row["ci_flagged"] = bool(
                spec.max_ci is not None and (half_width is None
                                             or half_width > spec.max_ci))
        for column in ROW_COLUMNS:
            row.setdefault(column, None)
    rows.sort(key=_sort_key)
    return [{column: row[column] for column in ROW_COLUMNS} for row in rows]


def write_csv(rows, path=None, stream=None, columns=None):
    """Write rows with a header row (12 significant digits).

    Exactly one of ``path`` and ``stream`` must be given.
    """
    assert (path is None) != (stream is None), "give a path or a stream"
    if columns is None:
        columns = list(rows[0]) if rows else []
    if path is not None:
        with open(Path(path), "w", newline="") as csv_file:
            return write_csv(rows, stream=csv_file, columns=columns)
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_number(row.get(column))
                         for column in columns])
    return None


def write_manifest(path, spec, version, rows=None):
    """Record what produced a CSV file.

    Parameters
    ----------
    path : str or Path
    spec : SweepSpec or dict
        sweep specification, or a plain description (e.g. of a table)
    version : str
        pyredlab version
    rows : list of dict, optional
        the emitted rows; their seeds and count are recorded
    """
    description = spec.to_dict() if hasattr(spec, "to_dict") else spec
    manifest = {"tool": "pyredlab", "version": version,
                "spec": rounded(description)}
    if rows is not None:
        manifest["rows"] = len(rows)
        manifest["seeds"] = sorted({row["seed"] for row in rows
                                    if row.get("seed") is not None})
    with open(Path(path), "w") as manifest_file:
        json.dump(manifest, manifest_file, indent=2, sort_keys=True,
                  allow_nan=False)
        manifest_file.write("\n")
    return Path(path)
