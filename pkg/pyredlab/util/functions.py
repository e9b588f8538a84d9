"""Arithmetic helpers that work on both sympy expressions and numbers.

The closed-form frontiers are built symbolically and evaluated
numerically, so the same helper has to serve both worlds.
"""

# This file is part of pyredlab.
#
# License: BSD 2-clause license

import math

import numpy as np
import sympy as sp


REL_TOL = 1e-9
"""relative tolerance used when comparing arrival rates and ratios"""


def safe_div(a, b, i=np.inf, z=0):
    """division extended to divisor zero

    returns a/b if b!=0, i (default:inf) if b=0<a, -i if b=0>a,
    and z (default:0) if b=0=a
    """
    return (sp.Piecewise(
                (sp.sign(a) * i, sp.And(sp.Eq(b, 0), sp.Ne(a, 0))),
                (z, sp.Eq(b, 0)),
                (a / b, True))
            if isinstance(a, sp.Expr) or isinstance(b, sp.Expr)
            else np.sign(a) * i if b == 0 != a
            else z if b == 0
            else a / b)


def positive_part(x):
    """(x)^+, i.e. max(x, 0), for numbers and sympy expressions"""
    return (sp.Max(x, 0) if isinstance(x, sp.Expr)
            else max(x, 0))


def compare(a, b, rel_tol=REL_TOL):
    """three-way comparison with a relative tolerance

    returns -1 if a < b, 1 if a > b and 0 if a and b agree within
    rel_tol (relative to the larger magnitude)
    """
    if math.isclose(a, b, rel_tol=rel_tol, abs_tol=0.0):
        return 0
    return -1 if a < b else 1
