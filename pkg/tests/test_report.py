"""Test file for the stability report and the mu* search."""

# This file is part of pyredlab.
#
# License: BSD 2-clause license

import json
from functools import partial

import pytest

from pyredlab.data_model import (ServiceDistribution, geometric_capacities,
                                 make_red_d)
from pyredlab.errors import StabilityError
from pyredlab.experiments.tables import nested_geometric, red_d_geometric
from pyredlab.stability import (StabilityReport, Verdict, analyze,
                                improvement_verdict, mu_star)

from .conftest import example_topology


def test_improvement_verdict():
    better = make_red_d(3, 2, geometric_capacities(3, 2.0))
    assert improvement_verdict(better) == (True, pytest.approx(2.0))
    worse = make_red_d(4, 2, (1, 1, 1, 1))
    assert improvement_verdict(worse) == (False, pytest.approx(0.5))


@pytest.mark.parametrize("num_servers, d, expected", [(3, 2, 1.41),
                                                      (4, 2, 1.26)])
def test_mu_star_red_d(num_servers, d, expected):
    value = mu_star(partial(red_d_geometric, num_servers, d), (1.0, 3.0))
    assert value == pytest.approx(expected, abs=0.01)


def test_mu_star_w_model():
    value = mu_star(partial(nested_geometric, "W"), (1.0, 2.0))
    assert value == pytest.approx(1.33, abs=0.01)


def test_mu_star_without_sign_change():
    with pytest.raises(StabilityError):
        mu_star(partial(red_d_geometric, 3, 2), (2.0, 3.0))


def test_analyze_example():
    report = analyze(example_topology(9.0))
    assert report.lambda_R == pytest.approx(8.0)
    assert report.i_star == 3
    assert report.per_server_verdict[2] is Verdict.stable
    assert report.per_server_verdict[0] is Verdict.unstable
    assert report.lambda_R <= report.lambda_J
    assert report.warnings == ()


def test_analyze_warns_on_atoms(caplog):
    report = analyze(example_topology(), ServiceDistribution.deterministic())
    assert len(report.warnings) == 1
    assert "atoms" in caplog.text


def test_report_json(example):
    report = analyze(example, lam=7.5)
    raw = report.to_dict()
    text = json.dumps(raw, allow_nan=False)
    assert json.loads(text)["lambda"] == 7.5
    assert [stage["L"] for stage in raw["stages"]] == [[3], [2], [1]]
    restored = StabilityReport.from_dict(raw)
    assert restored.lambda_R == report.lambda_R
    assert restored.per_server_verdict == report.per_server_verdict
