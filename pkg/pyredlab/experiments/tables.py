"""Stability tables of redundancy-d and nested systems.

Every cell is recomputed from the general subsystem recursion, so the
tables double as a regression check of the stability module. No
simulation is involved and the output is byte-stable.
"""

# This file is part of pyredlab.
#
# License: BSD 2-clause license

#
# Imports
#

import logging
from functools import partial

from ..data_model import (NESTED_TYPE_SETS, geometric_capacities,
                          linear_capacities, make_nested, make_red_d)
from ..data_model.generators import NESTED_SERVER_COUNTS
from ..errors import ConfigurationError
from ..stability import lambda_B, lambda_R, mu_star


logger = logging.getLogger(__name__)

RED_D_PAIRS = ((3, 2), (4, 2), (5, 2), (10, 2), (4, 3), (5, 3), (10, 3))
"""(K, d) rows of the redundancy-d tables"""

RED_D_GEOMETRIC_MU = (1.0, 1.2, 1.4, 2.0, 3.0)
RED_D_MU_STAR_BRACKET = (1.0, 3.0)
RED_D_LINEAR_M = (1.0, 2.0, 3.0, 4.0, 6.0)

NESTED_MODELS = ("W", "WW", "WWWW")
NESTED_GEOMETRIC_MU = (1.0, 1.2, 1.4, 2.0)
NESTED_MU_STAR_BRACKET = (1.0, 2.0)
NESTED_LINEAR_M = (1.0, 2.0, 4.0, 6.0, 8.0)

TABLE_COLUMNS = {
    2: ("K", "d", "mu", "lambda_R", "lambda_B", "mu_star"),
    3: ("K", "d", "M", "lambda_R", "lambda_B"),
    4: ("model", "capacities", "parameter", "K", "lambda_R", "lambda_B",
        "mu_star"),
}


def red_d_geometric(num_servers, d, mu):
    """red-d topology with capacities mu^(k-1)"""
    return make_red_d(num_servers, d, geometric_capacities(num_servers, mu))


def nested_geometric(model, mu):
    """nested topology with capacities mu^(k-1) and uniform types"""
    return make_nested(model, geometric_capacities(
        NESTED_SERVER_COUNTS[model], mu))


def _red_d_geometric_rows():
    rows = []
    for num_servers, d in RED_D_PAIRS:
        crossover = mu_star(partial(red_d_geometric, num_servers, d),
                            RED_D_MU_STAR_BRACKET)
        for mu in RED_D_GEOMETRIC_MU:
            topology = red_d_geometric(num_servers, d, mu)
            rows.append({"K": num_servers, "d": d, "mu": mu,
                         "lambda_R": lambda_R(topology),
                         "lambda_B": lambda_B(topology),
                         "mu_star": crossover})
    return rows


def _red_d_linear_rows():
    rows = []
    for num_servers, d in RED_D_PAIRS:
        for upper in RED_D_LINEAR_M:
            topology = make_red_d(num_servers, d,
                                  linear_capacities(num_servers, upper))
            rows.append({"K": num_servers, "d": d, "M": upper,
                         "lambda_R": lambda_R(topology),
                         "lambda_B": lambda_B(topology)})
    return rows


def _nested_rows():
    rows = []
    for model in NESTED_MODELS:
        num_servers = NESTED_SERVER_COUNTS[model]
        crossover = mu_star(partial(nested_geometric, model),
                            NESTED_MU_STAR_BRACKET)
        for mu in NESTED_GEOMETRIC_MU:
            topology = nested_geometric(model, mu)
            rows.append({"model": model, "capacities": "geometric",
                         "parameter": mu, "K": num_servers,
                         "lambda_R": lambda_R(topology),
                         "lambda_B": lambda_B(topology),
                         "mu_star": crossover})
    for model in NESTED_MODELS:
        num_servers = NESTED_SERVER_COUNTS[model]
        for upper in NESTED_LINEAR_M:
            topology = make_nested(model,
                                   linear_capacities(num_servers, upper))
            rows.append({"model": model, "capacities": "linear",
                         "parameter": upper, "K": num_servers,
                         "lambda_R": lambda_R(topology),
                         "lambda_B": lambda_B(topology),
                         "mu_star": None})
    return rows


def reproduce_table(table_id):
    """Rows of one stability table.

    Parameters
    ----------
    table_id : int
        2 (red-d, geometric capacities), 3 (red-d, linear capacities) or
        4 (nested models)

    Returns
    -------
    list of dict
        keyed by TABLE_COLUMNS[table_id]
    """
    builders = {2: _red_d_geometric_rows, 3: _red_d_linear_rows,
                4: _nested_rows}
    if table_id not in builders:
        raise ConfigurationError("unknown table {!r}, expected one of {}"
                                 .format(table_id, sorted(builders)),
                                 field="table")
    rows = builders[table_id]()
    logger.debug("table %d: %d rows", table_id, len(rows))
    assert all(tuple(row) == TABLE_COLUMNS[table_id] for row in rows)
    return rows


assert set(NESTED_MODELS) <= set(NESTED_TYPE_SETS)
