"""CPLEX LP-format export and plain-text solution import.

Export layout (deterministic, ASCII)::

    \\ b-coloring representatives model: <n> vertices, <m> edges
    Maximize
     obj: x_1_1 + x_2_2 + ...
    Subject To
     cover_1: x_1_1 + x_3_1 = 1
     conflict_1_3_4: x_1_3 + x_1_4 - x_1_1 <= 0
     link_1_5: x_1_5 - x_1_1 <= 0
     blink_1_3: x_1_1 + x_3_3 - x_1_6 <= 1
    Bounds
     x_2_2 = 0
    Binaries
     x_1_1 x_1_3 ...
    End

Variable ``x_u_v`` (1-indexed) is the model variable ``(u-1, v-1)``.  Long
rows are wrapped; continuation lines start with two spaces.  Fixings become
bounds of the form ``x_u_v = 0`` or ``x_u_v = 1``.

Solution files are read line by line:

    # comment
    status optimal            (optional: optimal, feasible-time-limit, infeasible, unknown)
    objective 3
    x_1_1 1
    x_1_3 0

Variables not listed are 0.  The objective line is required and must match
the number of representatives set to 1.
"""

from __future__ import annotations

import re

from .model import Assignment, Model, Var

LINE_WIDTH = 78
STATUSES = ("optimal", "feasible-time-limit", "infeasible", "unknown")
_NAME = re.compile(r"^x_(\d+)_(\d+)$")


class SolutionFormatError(ValueError):
    """A solution file could not be read against its model."""


def var_name(var: Var) -> str:
    return f"x_{var[0] + 1}_{var[1] + 1}"


def parse_var_name(name: str) -> Var:
    match = _NAME.match(name)
    if not match:
        raise SolutionFormatError(f"bad variable name {name!r}")
    return int(match.group(1)) - 1, int(match.group(2)) - 1


def _wrap(head: str, pieces: list[str], tail: str) -> list[str]:
    lines, cur = [], head
    for piece in pieces + [tail]:
        if len(cur) + 1 + len(piece) > LINE_WIDTH and cur.strip():
            lines.append(cur)
            cur = "  " + piece
        else:
            cur = f"{cur} {piece}" if cur.strip() else cur + piece
    lines.append(cur)
    return lines


def _expr(terms) -> list[str]:
    out = []
    for i, (var, coef) in enumerate(terms):
        name = var_name(var)
        mag = "" if abs(coef) == 1 else f"{abs(coef)} "
        if i == 0:
            out.append(("- " if coef < 0 else "") + mag + name)
        else:
            out.append(("- " if coef < 0 else "+ ") + mag + name)
    return out


def export_lp(model: Model) -> str:
    g = model.graph
    lines = [f"\\ b-coloring representatives model: {g.n} vertices, {g.num_edges} edges", "Maximize"]
    lines += _wrap(" obj:", _expr([(v, 1) for v in model.objective_vars()]), "")
    lines[-1] = lines[-1].rstrip()
    lines.append("Subject To")
    for con in model.constraints():
        lines += _wrap(f" {con.name}:", _expr(con.terms), f"{con.sense} {con.rhs}")
    if model.fixings:
        lines.append("Bounds")
        for var in model.variables:
            if var in model.fixings:
                lines.append(f" {var_name(var)} = {model.fixings[var]}")
    lines.append("Binaries")
    lines += _wrap(" ", [var_name(v) for v in model.variables], "")
    lines[-1] = lines[-1].rstrip()
    lines.append("End")
    return "\n".join(lines) + "\n"


def format_solution(model: Model, x: Assignment, status: str = "optimal") -> str:
    """Write an assignment in the import format (all variables listed)."""
    lines = [f"status {status}", f"objective {model.objective(x)}"]
    lines += [f"{var_name(v)} {int(x.get(v, 0))}" for v in model.variables]
    return "\n".join(lines) + "\n"


def import_solution(model: Model, text: str) -> tuple[Assignment, int, str | None]:
    """Parse a solution file; returns (assignment, objective, status or None)."""
    x: Assignment = {}
    objective = None
    status = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise SolutionFormatError(f"line {lineno}: expected two fields")
        key, value = parts
        if key == "objective":
            try:
                objective = round(float(value))
            except ValueError:
                raise SolutionFormatError(f"line {lineno}: bad objective {value!r}") from None
            continue
        if key == "status":
            if value not in STATUSES:
                raise SolutionFormatError(f"line {lineno}: unknown status {value!r}")
            status = value
            continue
        var = parse_var_name(key)
        if not model.has_var(var):
            raise SolutionFormatError(f"line {lineno}: {key} is not a model variable")
        try:
            val = round(float(value))
        except ValueError:
            raise SolutionFormatError(f"line {lineno}: bad value {value!r}") from None
        if val not in (0, 1):
            raise SolutionFormatError(f"line {lineno}: {key} must be 0 or 1")
        if val:
            x[var] = 1
    if objective is None:
        raise SolutionFormatError("missing objective line")
    if objective != model.objective(x):
        raise SolutionFormatError(
            f"objective line says {objective} but the assignment has {model.objective(x)} representatives"
        )
    return x, objective, status
