"""Kelvin-Planck check and entropy/coldness pair synthesis.

One LP decides the question: maximize ``s`` subject to
``<eta, dm_k> - <beta, q_k> >= 0`` for every generator, ``beta >= s`` and
``sum(beta) = 1``.  Because the constraints are homogeneous, a strictly
positive coldness exists exactly when the optimum is positive.  Otherwise the
dual multipliers on the generator rows combine the generators into a cyclic
process that only absorbs heat.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence, Union

from .cone import MembershipWitness
from .core import CDPair, ProcessVector, SignedMeasure, Theory, TheoryError, require_valid, total
from .ratlp import EQ, GE, LinearProgram, LpOutcome, Optimal, solve


class NotKelvinPlanck(TheoryError):
    def __init__(self, verdict: "Violating"):
        super().__init__("theory is not Kelvin-Planck compliant")
        self.verdict = verdict


@dataclass(frozen=True)
class Compliant:
    pair: CDPair
    slack: Fraction
    compliant = True


@dataclass(frozen=True)
class Violating:
    witness: MembershipWitness
    heating: SignedMeasure
    compliant = False

    def verify(self, t: Theory) -> bool:
        h = self.heating
        return (h.is_nonnegative() and total(h) == 1
                and self.witness.verify(t, ProcessVector({}, h)))


KpVerdict = Union[Compliant, Violating]
Constraint = tuple[Mapping[str, object], str, object]


def eta_var(s: str) -> str:
    return f"eta[{s}]"


def beta_var(s: str) -> str:
    return f"beta[{s}]"


def _cd_rows(lp: LinearProgram, t: Theory) -> None:
    for g in t.vectors:
        row = {eta_var(s): c for s, c in g.dm.items()}
        for s, c in g.q.items():
            row[beta_var(s)] = row.get(beta_var(s), 0) - c
        lp.add(row, GE, 0)


def pair_from(t: Theory, x: Mapping[str, Fraction]) -> tuple[dict[str, Fraction], dict[str, Fraction]]:
    return ({s: x[eta_var(s)] for s in t.states}, {s: x[beta_var(s)] for s in t.states})


def slack_program(t: Theory, extra: Iterable[Constraint] = ()) -> LinearProgram:
    """Max-slack LP: CD rows, ``beta[s] >= slack``, ``sum(beta) = 1``, plus ``extra``."""
    lp = LinearProgram()
    for s in t.states:
        lp.var(eta_var(s))
    for s in t.states:
        lp.var(beta_var(s))
    lp.var("slack")
    _cd_rows(lp, t)
    for s in t.states:
        lp.add({beta_var(s): 1, "slack": -1}, GE, 0)
    lp.add({beta_var(s): 1 for s in t.states}, EQ, 1)
    for coeffs, rel, rhs in extra:
        lp.add(coeffs, rel, rhs)
    lp.maximize({"slack": 1})
    return lp


def positive_scale(t: Theory, extra: Iterable[Constraint] = ()) -> Compliant | None:
    """A strictly positive pair satisfying ``extra`` as well, if one exists."""
    out = solve(slack_program(t, extra))
    if isinstance(out, Optimal) and out.value > 0:
        eta, beta = pair_from(t, out.assignment)
        return Compliant(CDPair(eta, beta), out.value)
    return None


@lru_cache(maxsize=8192)
def check_kp(t: Theory) -> KpVerdict:
    require_valid(t)
    out = solve(slack_program(t))
    if isinstance(out, Optimal) and out.value > 0:
        eta, beta = pair_from(t, out.assignment)
        return Compliant(CDPair(eta, beta), out.value)
    y = out.dual if isinstance(out, Optimal) else out.farkas
    lam = {k: y[k] for k in range(len(t.generators)) if y[k]}
    heat = SignedMeasure()
    for k, c in lam.items():
        heat = heat + t.generators[k].vector.q.scale(c)
    norm = total(heat)
    verdict = Violating(MembershipWitness({k: c / norm for k, c in lam.items()}), heat.scale(1 / norm))
    assert verdict.verify(t), "dual did not yield a forbidden-cone witness"
    return verdict


def require_kp(t: Theory) -> Compliant:
    v = check_kp(t)
    if isinstance(v, Violating):
        raise NotKelvinPlanck(v)
    return v


def cd_feasible(t: Theory, pair: CDPair) -> bool:
    if not pair.covers(t.states):
        raise TheoryError("pair does not cover every state")
    return all(pair.inequality(g) >= 0 for g in t.vectors)


def cd_program(t: Theory, extra: Iterable[Constraint] = (), normalize: bool = True) -> LinearProgram:
    """Closed relaxation of the coldness/entropy set: CD rows, beta >= 0, sum(beta) = 1."""
    lp = LinearProgram()
    for s in t.states:
        lp.var(eta_var(s))
    for s in t.states:
        lp.var(beta_var(s), lower=0)
    _cd_rows(lp, t)
    if normalize:
        lp.add({beta_var(s): 1 for s in t.states}, EQ, 1)
    for coeffs, rel, rhs in extra:
        lp.add(coeffs, rel, rhs)
    return lp


def cd_extremize(t: Theory, objective: Mapping[str, object], extra: Sequence[Constraint] = (),
                 sense: str = "max") -> LpOutcome:
    """Optimize a linear functional of ``eta[s]``/``beta[s]`` over the closed relaxation.

    A value attained only on the boundary (some beta zero) is an infimum or
    supremum over genuine scales, never a value taken by one.
    """
    lp = cd_program(t, extra)
    (lp.maximize if sense == "max" else lp.minimize)(objective)
    return solve(lp)


def average(p1: CDPair, p2: CDPair) -> CDPair:
    half = Fraction(1, 2)
    return CDPair({s: half * (p1.eta[s] + p2.eta[s]) for s in p1.eta},
                  {s: half * (p1.beta[s] + p2.beta[s]) for s in p1.beta})

