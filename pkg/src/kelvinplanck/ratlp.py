"""Exact rational linear programming with checkable certificates.

Two-phase tableau simplex over ``Fraction`` with Bland's rule.  Every
outcome carries a certificate that ``check_certificate`` re-verifies by
plain arithmetic on the original rows:

* ``Optimal``: a feasible assignment and dual multipliers proving the bound.
* ``Feasible``: a feasible assignment (programs without an objective).
* ``Infeasible``: Farkas multipliers combining the rows into ``0 >= positive``.
* ``Unbounded``: a feasible point and an improving recession direction.

Multipliers refer to ``lp.rows()``: the explicit constraints followed by one
row per declared variable bound, each read in ``>=`` form (a ``<=`` row
``a·x <= b`` is read as ``-a·x >= -b``).  They are nonnegative on inequality
rows and free on equality rows.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .core import as_rational, format_rational

log = logging.getLogger(__name__)

LE, EQ, GE = "<=", "=", ">="
_ZERO = Fraction(0)


class MalformedProgram(ValueError):
    pass


@dataclass(frozen=True)
class Row:
    coeffs: Mapping[str, Fraction]
    relation: str
    rhs: Fraction
    origin: tuple

    def lhs(self, x: Mapping[str, Fraction]) -> Fraction:
        return sum((c * x[v] for v, c in self.coeffs.items()), _ZERO)

    def holds(self, x: Mapping[str, Fraction]) -> bool:
        value = self.lhs(x)
        if self.relation == LE:
            return value <= self.rhs
        if self.relation == GE:
            return value >= self.rhs
        return value == self.rhs

    def normalized(self) -> tuple[dict[str, Fraction], Fraction]:
        if self.relation == LE:
            return {v: -c for v, c in self.coeffs.items()}, -self.rhs
        return dict(self.coeffs), self.rhs


class LinearProgram:
    """Variables, linear constraints, optional bounds and an optional objective.

    Variables without bounds are free.
    """

    def __init__(self):
        self.variables: list[str] = []
        self.lower: dict[str, Fraction] = {}
        self.upper: dict[str, Fraction] = {}
        self.constraints: list[tuple[dict[str, Fraction], str, Fraction]] = []
        self.objective: dict[str, Fraction] | None = None
        self.sense = "max"
        self._declared: set[str] = set()

    def var(self, name: str, lower=None, upper=None) -> str:
        if name in self._declared:
            raise MalformedProgram(f"variable {name!r} declared twice")
        self.variables.append(name)
        self._declared.add(name)
        if lower is not None:
            self.lower[name] = as_rational(lower)
        if upper is not None:
            self.upper[name] = as_rational(upper)
        return name

    def _row(self, coeffs: Mapping[str, object]) -> dict[str, Fraction]:
        row = {}
        for v, c in coeffs.items():
            if v not in self._declared:
                raise MalformedProgram(f"undeclared variable {v!r}")
            c = as_rational(c)
            if c:
                row[v] = row.get(v, _ZERO) + c
        return {v: c for v, c in row.items() if c}

    def add(self, coeffs: Mapping[str, object], relation: str, rhs=0) -> int:
        if relation not in (LE, EQ, GE):
            raise MalformedProgram(f"bad relation {relation!r}")
        self.constraints.append((self._row(coeffs), relation, as_rational(rhs)))
        return len(self.constraints) - 1

    def maximize(self, coeffs: Mapping[str, object]) -> None:
        self.objective, self.sense = self._row(coeffs), "max"

    def minimize(self, coeffs: Mapping[str, object]) -> None:
        self.objective, self.sense = self._row(coeffs), "min"

    def rows(self) -> list[Row]:
        out = [Row(c, r, b, ("constraint", i)) for i, (c, r, b) in enumerate(self.constraints)]
        for v in self.variables:
            if v in self.lower:
                out.append(Row({v: Fraction(1)}, GE, self.lower[v], ("lower", v)))
            if v in self.upper:
                out.append(Row({v: Fraction(1)}, LE, self.upper[v], ("upper", v)))
        return out

    def objective_value(self, x: Mapping[str, Fraction]) -> Fraction:
        return sum((c * x[v] for v, c in (self.objective or {}).items()), _ZERO)

    def copy(self) -> LinearProgram:
        lp = LinearProgram()
        lp.variables = list(self.variables)
        lp._declared = set(self._declared)
        lp.lower, lp.upper = dict(self.lower), dict(self.upper)
        lp.constraints = [(dict(c), r, b) for c, r, b in self.constraints]
        lp.objective = None if self.objective is None else dict(self.objective)
        lp.sense = self.sense
        return lp

    def __repr__(self) -> str:
        lines = []
        if self.objective is not None:
            lines.append(f"{self.sense} {_fmt_expr(self.objective)}")
        for c, r, b in self.constraints:
            lines.append(f"  {_fmt_expr(c)} {r} {format_rational(b)}")
        for v in self.variables:
            lo, hi = self.lower.get(v), self.upper.get(v)
            if lo is not None or hi is not None:
                lines.append(f"  {v} in [{'-inf' if lo is None else lo}, {'inf' if hi is None else hi}]")
        return "\n".join(lines)


def _fmt_expr(coeffs: Mapping[str, Fraction]) -> str:
    return " + ".join(f"{format_rational(c)}*{v}" for v, c in coeffs.items()) or "0"


@dataclass(frozen=True)
class Optimal:
    assignment: dict[str, Fraction]
    value: Fraction
    dual: tuple[Fraction, ...]
    pivots: int = field(default=0, compare=False)
    kind = "optimal"


@dataclass(frozen=True)
class Feasible:
    assignment: dict[str, Fraction]
    pivots: int = field(default=0, compare=False)
    kind = "feasible"


@dataclass(frozen=True)
class Infeasible:
    farkas: tuple[Fraction, ...]
    pivots: int = field(default=0, compare=False)
    kind = "infeasible"


@dataclass(frozen=True)
class Unbounded:
    point: dict[str, Fraction]
    ray: dict[str, Fraction]
    pivots: int = field(default=0, compare=False)
    kind = "unbounded"


LpOutcome = Union[Optimal, Feasible, Infeasible, Unbounded]


class _Tableau:
    """Dense tableau ``B^-1 [A | I | b]`` with one reduced-cost row."""

    def __init__(self, rows: list[list[Fraction]], ncols: int):
        self.t = rows
        self.ncols = ncols
        self.basis: list[int] = []
        self.obj: list[Fraction] = []
        self.pivots = 0

    def set_objective(self, cost: list[Fraction]) -> None:
        obj = list(cost) + [_ZERO]
        for i, b in enumerate(self.basis):
            cb = cost[b]
            if cb:
                row = self.t[i]
                for k, v in enumerate(row):
                    if v:
                        obj[k] -= cb * v
        self.obj = obj

    def pivot(self, r: int, j: int) -> None:
        prow = self.t[r]
        p = prow[j]
        if p != 1:
            prow = [v / p for v in prow]
            self.t[r] = prow
        nz = [k for k, v in enumerate(prow) if v]
        for i, row in enumerate(self.t):
            if i != r:
                f = row[j]
                if f:
                    for k in nz:
                        row[k] -= f * prow[k]
        f = self.obj[j]
        if f:
            for k in nz:
                self.obj[k] -= f * prow[k]
        self.basis[r] = j
        self.pivots += 1

    def run(self, allowed: int) -> int | None:
        """Minimize; returns an entering column proving unboundedness, else None."""
        while True:
            j = next((k for k in range(allowed) if self.obj[k] < 0), None)
            if j is None:
                return None
            best, r = None, None
            for i, row in enumerate(self.t):
                a = row[j]
                if a > 0:
                    ratio = row[-1] / a
                    if best is None or ratio < best or (ratio == best and self.basis[i] < self.basis[r]):
                        best, r = ratio, i
            if r is None:
                return j
            if log.isEnabledFor(logging.DEBUG):
                log.debug("pivot %d: column %d enters, row %d leaves\n%s", self.pivots, j, r, self.dump())
            self.pivot(r, j)

    def dump(self) -> str:
        lines = ["obj " + " ".join(format_rational(v) for v in self.obj)]
        for b, row in zip(self.basis, self.t):
            lines.append(f"x{b:<3}" + " ".join(format_rational(v) for v in row))
        return "\n".join(lines)


def solve(lp: LinearProgram) -> LpOutcome:
    rows = lp.rows()
    # internal columns: each variable maps to (offset, [(column, sign)])
    columns: list[tuple[str, int]] = []
    var_map: dict[str, tuple[Fraction, list[tuple[int, int]]]] = {}
    native: dict[str, str] = {}
    for v in lp.variables:
        lo, hi = lp.lower.get(v), lp.upper.get(v)
        if lo is not None:
            var_map[v] = (lo, [(len(columns), 1)])
            columns.append((v, 1))
            native[v] = "lower"
        elif hi is not None:
            var_map[v] = (hi, [(len(columns), -1)])
            columns.append((v, -1))
            native[v] = "upper"
        else:
            var_map[v] = (_ZERO, [(len(columns), 1), (len(columns) + 1, -1)])
            columns += [(v, 1), (v, -1)]
    nz = len(columns)

    # internal rows (normalized >= or =), remembering which original row each came from
    internal: list[tuple[dict[int, Fraction], bool, Fraction, int]] = []
    for idx, row in enumerate(rows):
        kind, name = row.origin
        if kind == "lower" or (kind == "upper" and native.get(name) == "upper"):
            continue
        coeffs, rhs = row.normalized()
        irow: dict[int, Fraction] = {}
        for v, c in coeffs.items():
            off, cols = var_map[v]
            rhs -= c * off
            for col, sign in cols:
                irow[col] = irow.get(col, _ZERO) + sign * c
        internal.append((irow, row.relation == EQ, rhs, idx))

    m = len(internal)
    slack_of: dict[int, int] = {}
    nslack = 0
    for i, (_, is_eq, _, _) in enumerate(internal):
        if not is_eq:
            slack_of[i] = nz + nslack
            nslack += 1
    art0 = nz + nslack
    ncols = art0 + m
    flips: list[int] = []
    mat: list[list[Fraction]] = []
    for i, (irow, is_eq, rhs, _) in enumerate(internal):
        line = [_ZERO] * (ncols + 1)
        for col, c in irow.items():
            line[col] = c
        if not is_eq:
            line[slack_of[i]] = Fraction(-1)
        line[-1] = rhs
        sign = 1
        if rhs < 0:
            sign = -1
            line = [-v for v in line]
        line[art0 + i] = Fraction(1)
        flips.append(sign)
        mat.append(line)

    tab = _Tableau(mat, ncols)
    tab.basis = [art0 + i for i in range(m)]
    tab.set_objective([_ZERO] * art0 + [Fraction(1)] * m)
    tab.run(ncols)
    if -tab.obj[-1] > 0:
        pi = [1 - tab.obj[art0 + i] for i in range(m)]
        y = _lift(rows, internal, flips, pi, var_map, native, lp, target={})
        return Infeasible(tuple(y), tab.pivots)

    for i in range(m):
        if tab.basis[i] >= art0:
            j = next((k for k in range(art0) if tab.t[i][k]), None)
            if j is not None:
                tab.pivot(i, j)

    cost = [_ZERO] * ncols
    c_min: dict[str, Fraction] = {}
    if lp.objective is not None:
        s = 1 if lp.sense == "min" else -1
        c_min = {v: s * c for v, c in lp.objective.items()}
        for v, c in c_min.items():
            for col, sign in var_map[v][1]:
                cost[col] += sign * c
    tab.set_objective(cost)
    entering = tab.run(art0)

    z = [_ZERO] * ncols
    for i, b in enumerate(tab.basis):
        z[b] = tab.t[i][-1]
    point = _recover(z, var_map)
    if entering is not None:
        d = [_ZERO] * ncols
        d[entering] = Fraction(1)
        for i, b in enumerate(tab.basis):
            d[b] = -tab.t[i][entering]
        ray = _recover(d, var_map, with_offset=False)
        return Unbounded(point, ray, tab.pivots)
    if lp.objective is None:
        return Feasible(point, tab.pivots)
    pi = [-tab.obj[art0 + i] for i in range(m)]
    y = _lift(rows, internal, flips, pi, var_map, native, lp, target=c_min)
    return Optimal(point, lp.objective_value(point), tuple(y), tab.pivots)


def _recover(z, var_map, with_offset: bool = True) -> dict[str, Fraction]:
    out = {}
    for v, (off, cols) in var_map.items():
        out[v] = (off if with_offset else _ZERO) + sum((sign * z[col] for col, sign in cols), _ZERO)
    return out


def _lift(rows, internal, flips, pi, var_map, native, lp, target) -> list[Fraction]:
    """Map simplex multipliers back onto ``lp.rows()`` and fill in bound rows."""
    y = [_ZERO] * len(rows)
    for i, (_, _, _, idx) in enumerate(internal):
        y[idx] = flips[i] * pi[i]
    residual = {v: _ZERO for v in lp.variables}
    for idx, row in enumerate(rows):
        if y[idx]:
            coeffs, _ = row.normalized()
            for v, c in coeffs.items():
                residual[v] += y[idx] * c
    for idx, row in enumerate(rows):
        kind, v = row.origin
        if kind == "lower" and native.get(v) == "lower":
            y[idx] = target.get(v, _ZERO) - residual[v]
        elif kind == "upper" and native.get(v) == "upper":
            y[idx] = residual[v] - target.get(v, _ZERO)
    return y


def _combination(rows: list[Row], y: Iterable[Fraction]) -> tuple[dict[str, Fraction], Fraction]:
    lhs: dict[str, Fraction] = {}
    rhs = _ZERO
    for row, m in zip(rows, y):
        if m:
            coeffs, b = row.normalized()
            for v, c in coeffs.items():
                lhs[v] = lhs.get(v, _ZERO) + m * c
            rhs += m * b
    return {v: c for v, c in lhs.items() if c}, rhs


def _signs_ok(rows: list[Row], y) -> bool:
    return len(y) == len(rows) and all(m >= 0 for row, m in zip(rows, y) if row.relation != EQ)


def check_certificate(lp: LinearProgram, outcome: LpOutcome) -> bool:
    """Re-verify an outcome against ``lp`` using exact arithmetic only."""
    rows = lp.rows()

    def feasible(x) -> bool:
        return set(x) >= set(lp.variables) and all(r.holds(x) for r in rows)

    if isinstance(outcome, Feasible):
        return feasible(outcome.assignment)
    if isinstance(outcome, Optimal):
        if lp.objective is None or not feasible(outcome.assignment):
            return False
        if lp.objective_value(outcome.assignment) != outcome.value:
            return False
        if not _signs_ok(rows, outcome.dual):
            return False
        s = 1 if lp.sense == "min" else -1
        lhs, rhs = _combination(rows, outcome.dual)
        want = {v: s * c for v, c in lp.objective.items() if c}
        return lhs == want and rhs == s * outcome.value
    if isinstance(outcome, Infeasible):
        if not _signs_ok(rows, outcome.farkas):
            return False
        lhs, rhs = _combination(rows, outcome.farkas)
        return not lhs and rhs > 0
    if isinstance(outcome, Unbounded):
        if lp.objective is None or not feasible(outcome.point):
            return False
        d = outcome.ray
        if set(d) < set(lp.variables):
            return False
        for row in rows:
            coeffs, _ = row.normalized()
            val = sum((c * d[v] for v, c in coeffs.items()), _ZERO)
            if val < 0 or (row.relation == EQ and val != 0):
                return False
        gain = lp.objective_value(d)
        return gain > 0 if lp.sense == "max" else gain < 0
    return False
