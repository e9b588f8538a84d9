"""Service requirement distributions.

All distributions are normalized to unit mean, so the arrival rate alone
sets the load. Copies of a job are identical: one draw per job.
"""

# This file is part of pyredlab.
#
# License: BSD 2-clause license

#
# Imports
#

import logging
from dataclasses import dataclass, field
from enum import Enum, unique

import numpy as np
from scipy import integrate

from ..errors import ConfigurationError


logger = logging.getLogger(__name__)

HYPEREXPONENTIAL_DEFAULTS = {"q": 0.2, "mu1": 0.4, "mu2": 1.6}
"""parameters of the hyperexponential distribution used in the experiments"""

BOUNDED_PARETO_DEFAULTS = {"alpha": 0.5, "k": 1 / 6, "qmax": 6.0}
"""parameters of the bounded Pareto distribution used in the experiments"""


@unique
class ServiceKind(Enum):
    """Supported families of service requirement distributions."""
    exponential = "exponential"
    deterministic = "deterministic"
    hyperexponential = "hyperexponential"
    bounded_pareto = "bounded_pareto"


KIND_ALIASES = {"exp": ServiceKind.exponential,
                "hyperexp": ServiceKind.hyperexponential,
                "pareto": ServiceKind.bounded_pareto}
"""alternative spellings accepted in config files"""

PARAMETER_NAMES = {
    ServiceKind.exponential: (),
    ServiceKind.deterministic: (),
    ServiceKind.hyperexponential: ("q", "mu1", "mu2"),
    ServiceKind.bounded_pareto: ("alpha", "k", "qmax"),
}


#
# Definition of class ServiceDistribution
#


@dataclass(frozen=True)
class ServiceDistribution:
    """A unit-mean service requirement distribution.

    Raw draws of the parametric family are divided by the raw mean, so the
    normalized distribution always has mean 1.
    """

    kind: ServiceKind = ServiceKind.exponential
    """distribution family"""
    params: tuple = ()
    """sorted (name, value) pairs of the family parameters"""
    mean: float = field(init=False, compare=False)
    """mean of the raw (unnormalized) family"""

    def __post_init__(self):
        kind = self.kind if isinstance(self.kind, ServiceKind) \
            else _parse_kind(self.kind)
        object.__setattr__(self, "kind", kind)
        params = dict(self.params)
        if not params:
            if kind is ServiceKind.hyperexponential:
                params = dict(HYPEREXPONENTIAL_DEFAULTS)
            elif kind is ServiceKind.bounded_pareto:
                params = dict(BOUNDED_PARETO_DEFAULTS)
        expected = set(PARAMETER_NAMES[kind])
        if set(params) != expected:
            raise ConfigurationError(
                "{} needs parameters {}, got {}".format(
                    kind.value, sorted(expected), sorted(params)),
                field="service")
        params = {name: float(value) for name, value in params.items()}
        _check_parameters(kind, params)
        object.__setattr__(self, "params", tuple(sorted(params.items())))
        object.__setattr__(self, "mean", _raw_mean(kind, params))

    @classmethod
    def exponential(cls):
        """Exp(1) service requirements"""
        return cls(ServiceKind.exponential)

    @classmethod
    def deterministic(cls):
        """service requirement 1 for every job"""
        return cls(ServiceKind.deterministic)

    @classmethod
    def hyperexponential(cls, q, mu1, mu2):
        """Exp(mu1) with probability q, else Exp(mu2), rescaled"""
        return cls(ServiceKind.hyperexponential,
                   (("q", q), ("mu1", mu1), ("mu2", mu2)))

    @classmethod
    def bounded_pareto(cls, alpha, k, qmax):
        """Pareto(alpha) truncated to [k, qmax], rescaled"""
        return cls(ServiceKind.bounded_pareto,
                   (("alpha", alpha), ("k", k), ("qmax", qmax)))

    @property
    def parameters(self):
        """parameters as a dict"""
        return dict(self.params)

    @property
    def has_atoms(self):
        """whether the CDF has atoms (violates the atomless assumption)"""
        return self.kind is ServiceKind.deterministic

    @property
    def is_exponential(self):
        return self.kind is ServiceKind.exponential

    def support(self):
        """(lower, upper) bounds of the normalized distribution"""
        if self.kind is ServiceKind.deterministic:
            return 1.0, 1.0
        if self.kind is ServiceKind.bounded_pareto:
            params = self.parameters
            return params["k"] / self.mean, params["qmax"] / self.mean
        return 0.0, np.inf

    def sample(self, rng, size=None):
        """Draw normalized service requirements.

        Parameters
        ----------
        rng : numpy.random.Generator
        size : int, optional
            number of draws; a single float is returned if omitted

        Returns
        -------
        float or numpy.ndarray
        """
        params = self.parameters
        if self.kind is ServiceKind.exponential:
            draws = rng.exponential(1.0, size)
        elif self.kind is ServiceKind.deterministic:
            draws = 1.0 if size is None else np.ones(size)
        elif self.kind is ServiceKind.hyperexponential:
            first = rng.random(size) < params["q"]
            draws = np.where(first,
                             rng.exponential(1.0 / params["mu1"], size),
                             rng.exponential(1.0 / params["mu2"], size))
        else:
            alpha, k, qmax = params["alpha"], params["k"], params["qmax"]
            u = rng.random(size)
            # inverse CDF of the truncated Pareto distribution
            draws = k / (1.0 - u * (1.0 - (k / qmax) ** alpha)) \
                ** (1.0 / alpha)
        draws = draws / self.mean
        return float(draws) if size is None else draws

    def to_dict(self):
        """JSON representation"""
        result = {"kind": self.kind.value}
        result.update(self.parameters)
        return result

    @classmethod
    def from_dict(cls, raw, field_prefix="service"):
        """Parse ``{"kind": "hyperexp", "q": 0.2, "mu1": 0.4, "mu2": 1.6}``.

        A bare string such as ``"exponential"`` is accepted as well.
        """
        if isinstance(raw, str):
            raw = {"kind": raw}
        if not isinstance(raw, dict) or "kind" not in raw:
            raise ConfigurationError("needs a 'kind'", field=field_prefix)
        params = {key: value for key, value in raw.items() if key != "kind"}
        try:
            return cls(_parse_kind(raw["kind"]), tuple(params.items()))
        except ConfigurationError as error:
            if error.field and error.field.startswith("service"):
                error.field = field_prefix + error.field[len("service"):]
            raise
        except (TypeError, ValueError) as error:
            raise ConfigurationError(str(error), field=field_prefix) \
                from error


def _parse_kind(raw_kind):
    """translate a config string into a ServiceKind"""
    if raw_kind in KIND_ALIASES:
        return KIND_ALIASES[raw_kind]
    try:
        return ServiceKind(raw_kind)
    except ValueError:
        raise ConfigurationError(
            "unknown service kind {!r}".format(raw_kind),
            field="service.kind") from None


def _check_parameters(kind, params):
    """parameter ranges of the parametric families"""
    if kind is ServiceKind.hyperexponential:
        if not 0 <= params["q"] <= 1:
            raise ConfigurationError("q must lie in [0, 1]",
                                     field="service.q")
        if params["mu1"] <= 0 or params["mu2"] <= 0:
            raise ConfigurationError("rates must be positive",
                                     field="service.mu1")
    elif kind is ServiceKind.bounded_pareto:
        if params["alpha"] <= 0:
            raise ConfigurationError("alpha must be positive",
                                     field="service.alpha")
        if not 0 < params["k"] < params["qmax"]:
            raise ConfigurationError("need 0 < k < qmax",
                                     field="service.k")


def _raw_mean(kind, params):
    """mean of the unnormalized family"""
    if kind is ServiceKind.hyperexponential:
        return params["q"] / params["mu1"] \
            + (1 - params["q"]) / params["mu2"]
    if kind is ServiceKind.bounded_pareto:
        alpha, k, qmax = params["alpha"], params["k"], params["qmax"]
        norm = 1.0 - (k / qmax) ** alpha

        def density(x):
            return alpha * k ** alpha * x ** (-alpha - 1) / norm

        value, error = integrate.quad(lambda x: x * density(x), k, qmax,
                                      limit=200)
        logger.debug("bounded Pareto raw mean %.12g (quadrature error %.1e)",
                     value, error)
        return value
    return 1.0


def sample_service(distribution, rng):
    """Draw one normalized service requirement.

    Parameters
    ----------
    distribution : ServiceDistribution
    rng : numpy.random.Generator
        owned by the caller; the draw is deterministic given its state

    Returns
    -------
    float
        strictly positive requirement
    """
    value = distribution.sample(rng)
    assert value > 0, "service requirements must be positive"
    return value
