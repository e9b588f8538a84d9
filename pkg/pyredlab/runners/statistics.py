"""Output analysis: regenerative ratio estimator and drift tests."""

# This file is part of pyredlab.
#
# License: BSD 2-clause license

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats


CONFIDENCE = 0.95
DRIFT_BATCHES = 20
"""batch means entering the drift regression"""
DRIFT_T_THRESHOLD = 3.0
"""t-statistic above which a positive slope counts as divergence"""


class RegenerativeEstimator:
    """Time average of the number of jobs over i.i.d. cycles.

    A cycle contributes its area Y (integral of the number of jobs) and
    its length tau. The estimate is sum Y / sum tau with the CLT
    confidence interval of the ratio estimator.
    """

    def __init__(self, num_servers):
        self.areas = []
        self.lengths = []
        self.server_areas = np.zeros(num_servers)

    @property
    def num_cycles(self):
        return len(self.areas)

    def add_cycle(self, area, length, server_area):
        assert length > 0, "cycles have positive length"
        self.areas.append(area)
        self.lengths.append(length)
        self.server_areas += server_area

    def mean(self):
        return math.fsum(self.areas) / math.fsum(self.lengths)

    def half_width(self, confidence=CONFIDENCE):
        """half-width of the confidence interval, inf for < 2 cycles"""
        count = self.num_cycles
        if count < 2:
            return math.inf
        areas, lengths = np.array(self.areas), np.array(self.lengths)
        residuals = areas - self.mean() * lengths
        z = stats.norm.ppf(0.5 + confidence / 2)
        return float(z * residuals.std(ddof=1)
                     / (lengths.mean() * math.sqrt(count)))

    def per_server_mean(self):
        """time-average number of copies at every server"""
        return self.server_areas / math.fsum(self.lengths)


@dataclass(frozen=True)
class DriftTest:
    """Least-squares trend of a time series."""

    slope: float
    t_stat: float
    points: int

    @property
    def diverged(self):
        return self.slope > 0 and self.t_stat > DRIFT_T_THRESHOLD


def slope_test(times, values, batches=DRIFT_BATCHES):
    """Regress batch means of ``values`` on batch means of ``times``.

    Batching removes most of the autocorrelation of consecutive events,
    so the t-statistic is meaningful.
    """
    times, values = np.asarray(times, float), np.asarray(values, float)
    batches = min(batches, len(times))
    if batches < 3:
        return DriftTest(0.0, 0.0, batches)
    x = np.array([chunk.mean() for chunk in np.array_split(times, batches)])
    y = np.array([chunk.mean() for chunk in np.array_split(values, batches)])
    if np.ptp(x) == 0:
        return DriftTest(0.0, 0.0, batches)
    fit = stats.linregress(x, y)
    if fit.stderr == 0:
        t_stat = math.copysign(math.inf, fit.slope) if fit.slope else 0.0
    else:
        t_stat = fit.slope / fit.stderr
    return DriftTest(float(fit.slope), float(t_stat), batches)


def drift_test(times, values, batches=DRIFT_BATCHES):
    """slope_test over the last half of the series"""
    half = len(times) // 2
    return slope_test(np.asarray(times)[half:], np.asarray(values)[half:],
                      batches)
