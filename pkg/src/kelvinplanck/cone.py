"""Membership queries on the cone generated by a theory's process vectors.

Each query is one exact LP over nonnegative generator weights.  A failed
membership test yields the LP's Farkas row, read as a linear functional
that is nonpositive on every generator but positive on the target.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .core import ProcessVector, SignedMeasure, Theory, check_vector
from .ratlp import EQ, Feasible, Infeasible, LinearProgram, Optimal, solve

_ZERO = Fraction(0)


@dataclass(frozen=True)
class MembershipWitness:
    coefficients: Mapping[int, Fraction]

    def combine(self, t: Theory) -> ProcessVector:
        out = ProcessVector()
        for k, c in self.coefficients.items():
            out = out + t.generators[k].vector.scale(c)
        return out

    def verify(self, t: Theory, target: ProcessVector) -> bool:
        return (all(c >= 0 for c in self.coefficients.values())
                and all(0 <= k < len(t.generators) for k in self.coefficients)
                and self.combine(t) == target)


@dataclass(frozen=True)
class Separator:
    """Functional (f_dm, f_q) with f(g) <= 0 on all generators and f(target) > 0."""

    f_dm: SignedMeasure
    f_q: SignedMeasure

    def __call__(self, v: ProcessVector) -> Fraction:
        return v.dm.dot(self.f_dm) + v.q.dot(self.f_q)

    def verify(self, t: Theory, target: ProcessVector) -> bool:
        return all(self(g) <= 0 for g in t.vectors) and self(target) > 0


Affine = Mapping[str, Mapping[str, Fraction]]  # state -> {lp variable: coefficient}


class ConeSystem:
    """Collects several "this affine vector lies in the cone" requirements into one LP.

    Each requirement gets its own block of generator weights.  Callers add
    their own variables and constraints to ``self.lp`` directly.
    """

    def __init__(self, t: Theory):
        self.t = t
        self.lp = LinearProgram()
        self.blocks: list[list[str]] = []

    def require(self, fixed: ProcessVector, dm_terms: Affine | None = None,
                q_terms: Affine | None = None, sign: int = 1) -> int:
        """Require ``sign * (fixed + terms)`` to be a cone member; returns the block id."""
        b = len(self.blocks)
        lam = [self.lp.var(f"lam{b}_{k}", lower=0) for k in range(len(self.t.generators))]
        self.blocks.append(lam)
        for part, terms in (("dm", dm_terms or {}), ("q", q_terms or {})):
            for s in self.t.states:
                row = {}
                for k, g in enumerate(self.t.generators):
                    c = getattr(g.vector, part)[s]
                    if c:
                        row[lam[k]] = c
                for v, c in terms.get(s, {}).items():
                    row[v] = row.get(v, _ZERO) - sign * c
                self.lp.add(row, EQ, sign * getattr(fixed, part)[s])
        return b

    def witness(self, block: int, assignment: Mapping[str, Fraction]) -> MembershipWitness:
        return MembershipWitness({k: assignment[v] for k, v in enumerate(self.blocks[block]) if assignment[v]})

    def solve(self):
        return solve(self.lp)


def query(t: Theory, target: ProcessVector) -> MembershipWitness | Separator:
    """Membership witness when ``target`` lies in the cone, else a separating functional."""
    check_vector(t, target)
    sys = ConeSystem(t)
    sys.require(target)
    out = sys.solve()
    if isinstance(out, (Feasible, Optimal)):
        return sys.witness(0, out.assignment)
    assert isinstance(out, Infeasible)
    states = t.states.labels
    n = len(states)
    y = out.farkas
    return Separator(SignedMeasure(zip(states, y[:n])), SignedMeasure(zip(states, y[n:2 * n])))


def member(t: Theory, target: ProcessVector) -> MembershipWitness | None:
    found = query(t, target)
    return found if isinstance(found, MembershipWitness) else None


def member_free(t: Theory, fixed: ProcessVector, free: Iterable[str] = (),
                nonneg: bool = False) -> tuple[MembershipWitness, SignedMeasure] | None:
    """Search for w supported on ``free`` with ``(fixed.dm, fixed.q + w)`` in the cone.

    With ``nonneg`` the free values must be nonnegative.
    """
    check_vector(t, fixed)
    free = t.states.sort(set(free))
    sys = ConeSystem(t)
    names = {s: sys.lp.var(f"w[{s}]", lower=0 if nonneg else None) for s in free}
    sys.require(fixed, q_terms={s: {v: Fraction(1)} for s, v in names.items()})
    out = sys.solve()
    if isinstance(out, Infeasible):
        return None
    return sys.witness(0, out.assignment), SignedMeasure({s: out.assignment[v] for s, v in names.items()})


def contains_subspace(t: Theory, basis: Iterable[ProcessVector]) -> bool:
    return all(member(t, b) is not None and member(t, -b) is not None for b in basis)
