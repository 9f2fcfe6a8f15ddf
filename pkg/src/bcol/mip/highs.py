"""The representatives model handed to HiGHS through ``scipy.optimize.milp``."""

from __future__ import annotations

import numpy as np
from scipy import sparse
from scipy.optimize import Bounds, LinearConstraint, milp

from .model import Assignment, Model


def solve_highs(model: Model, time_limit: float) -> tuple[Assignment | None, float, str]:
    """Returns (assignment or None, dual bound, status)."""
    nvar = len(model.variables)
    index = model.index
    rows, cols, vals, lo, hi = [], [], [], [], []
    for r, con in enumerate(model.constraints()):
        for var, coef in con.terms:
            rows.append(r)
            cols.append(index[var])
            vals.append(coef)
        lo.append(con.rhs if con.sense in ("=", ">=") else -np.inf)
        hi.append(con.rhs if con.sense in ("=", "<=") else np.inf)
    a = sparse.csr_array((vals, (rows, cols)), shape=(len(lo), nvar))
    c = np.zeros(nvar)
    for var in model.objective_vars():
        c[index[var]] = -1.0
    lb, ub = np.zeros(nvar), np.ones(nvar)
    for var, val in model.fixings.items():
        lb[index[var]] = ub[index[var]] = val
    res = milp(
        c,
        constraints=LinearConstraint(a, lo, hi),
        integrality=np.ones(nvar),
        bounds=Bounds(lb, ub),
        options={"time_limit": max(time_limit, 0.01), "disp": False},
    )
    dual = getattr(res, "mip_dual_bound", None)
    bound = float(-dual) if dual is not None and np.isfinite(dual) else float(model.graph.n)
    if res.x is None:
        status = "infeasible" if res.status == 2 else "unknown"
        return None, bound, status
    x = {model.variables[i]: 1 for i in np.nonzero(np.round(res.x) > 0.5)[0]}
    status = "optimal" if res.status == 0 else "feasible-time-limit"
    if status == "optimal":
        bound = float(model.objective(x))
    return x, bound, status
