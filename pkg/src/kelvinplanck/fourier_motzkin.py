"""Exact Fourier-Motzkin elimination, used as an independent LP oracle.

Shares nothing with the simplex engine except the ``LinearProgram`` data
container.  Redundant combinations are pruned with Chernikov's rule (a row
derived from more than ``k + 1`` originals after ``k`` eliminations is
implied by the others) and by exact duplicate removal.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .ratlp import EQ, LinearProgram

# a·x >= b over variable positions, with the set of original rows it came from
_Ineq = tuple[tuple[Fraction, ...], Fraction, frozenset]


class Contradiction(Exception):
    pass


@dataclass(frozen=True)
class FmResult:
    status: str  # "infeasible" | "feasible" | "optimal" | "unbounded"
    value: Optional[Fraction] = None


def _key(a: tuple[Fraction, ...], b: Fraction):
    scale = next((abs(c) for c in a if c), abs(b) or Fraction(1))
    return tuple(c / scale for c in a), b / scale


def _tidy(rows: list[_Ineq]) -> list[_Ineq]:
    best: dict = {}
    for a, b, h in rows:
        if not any(a):
            if b > 0:
                raise Contradiction
            continue
        k = _key(a, b)
        if k not in best or len(h) < len(best[k][2]):
            best[k] = (a, b, h)
    return list(best.values())


def eliminate(rows: list[_Ineq], var: int, done: int) -> list[_Ineq]:
    pos = [r for r in rows if r[0][var] > 0]
    neg = [r for r in rows if r[0][var] < 0]
    out = [r for r in rows if r[0][var] == 0]
    for ap, bp, hp in pos:
        for an, bn, hn in neg:
            h = hp | hn
            if len(h) > done + 1:
                continue
            fp, fn = -an[var], ap[var]
            a = tuple(fp * x + fn * y for x, y in zip(ap, an))
            out.append((a, fp * bp + fn * bn, h))
    return _tidy(out)


def fm_solve(lp: LinearProgram) -> FmResult:
    names = list(lp.variables)
    has_obj = lp.objective is not None
    width = len(names) + (1 if has_obj else 0)
    pos = {v: i for i, v in enumerate(names)}
    rows: list[_Ineq] = []

    def add(coeffs: dict, rhs: Fraction) -> None:
        a = [Fraction(0)] * width
        for v, c in coeffs.items():
            a[pos[v]] += c
        rows.append((tuple(a), rhs, frozenset([len(rows)])))

    for row in lp.rows():
        coeffs, rhs = row.normalized()
        add(coeffs, rhs)
        if row.relation == EQ:
            add({v: -c for v, c in coeffs.items()}, -rhs)
    if has_obj:
        t = len(names)
        pos["__objective__"] = t
        obj = dict(lp.objective)
        add({**{v: -c for v, c in obj.items()}, "__objective__": Fraction(1)}, Fraction(0))
        add({**obj, "__objective__": Fraction(-1)}, Fraction(0))

    try:
        rows = _tidy(rows)
        for k in range(len(names)):
            rows = eliminate(rows, k, k + 1)
    except Contradiction:
        return FmResult("infeasible")
    if not has_obj:
        return FmResult("feasible")
    lo = [b / a[-1] for a, b, _ in rows if a[-1] > 0]
    hi = [b / a[-1] for a, b, _ in rows if a[-1] < 0]
    if lo and hi and max(lo) > min(hi):
        return FmResult("infeasible")
    if lp.sense == "max":
        return FmResult("optimal", min(hi)) if hi else FmResult("unbounded")
    return FmResult("optimal", max(lo)) if lo else FmResult("unbounded")
