"""Clausius, strong Clausius and Clausius-Duhem coldness scales.

For a given positive coldness ``beta``:

* Clausius: no true cyclic process absorbs net ``beta``-weighted heat.
* strong Clausius: the same for every cyclic element of the cone.
* Clausius-Duhem: some entropy ``eta`` makes ``(eta, beta)`` a valid pair.

The quadratic two-state family (``xi >= a^2``) is not polyhedral; sampled
versions go through the LP pipeline and exact statements go through the
closed-form functions at the bottom of this module.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .cdsynth import eta_var
from .cone import ConeSystem
from .core import ZERO, CDPair, SignedMeasure, Theory, TheoryError, as_rational
from .ratlp import GE, LE, Infeasible, LinearProgram, Optimal, solve


@dataclass(frozen=True)
class ScaleVerdict:
    clausius: bool
    strong_clausius: bool
    clausius_duhem: bool
    eta: Mapping[str, Fraction] | None = None
    heating_cycle: SignedMeasure | None = None

    def chain_holds(self) -> bool:
        return (not self.clausius_duhem or self.strong_clausius) and (not self.strong_clausius or self.clausius)


def _beta(t: Theory | None, beta: Mapping[str, object], labels=None) -> dict[str, Fraction]:
    b = {str(s): as_rational(v) for s, v in beta.items()}
    labels = labels if labels is not None else t.states.labels
    missing = [s for s in labels if s not in b]
    if missing:
        raise TheoryError(f"coldness missing at {missing}")
    if any(b[s] <= 0 for s in labels):
        raise TheoryError("coldness must be positive")
    return b


def clausius(t: Theory, beta: Mapping[str, object]) -> bool:
    b = _beta(t, beta)
    return all(g.vector.q.dot(b) <= 0 for g in t.generators if g.true_process and not g.vector.dm)


def strong_clausius_gap(t: Theory, beta: Mapping[str, object]) -> tuple[Fraction, SignedMeasure]:
    """Max of ``<beta, q>`` over cyclic cone elements ``(0, q)`` with ``|q|_1 <= 1``."""
    b = _beta(t, beta)
    sys = ConeSystem(t)
    lp = sys.lp
    q = {s: lp.var(f"q[{s}]") for s in t.states}
    u = {s: lp.var(f"u[{s}]", lower=0) for s in t.states}
    for s in t.states:
        lp.add({u[s]: 1, q[s]: -1}, GE, 0)
        lp.add({u[s]: 1, q[s]: 1}, GE, 0)
    lp.add({v: 1 for v in u.values()}, LE, 1)
    sys.require(ZERO, q_terms={s: {v: Fraction(1)} for s, v in q.items()})
    lp.maximize({q[s]: b[s] for s in t.states})
    out = sys.solve()
    assert isinstance(out, Optimal)
    return out.value, SignedMeasure({s: out.assignment[v] for s, v in q.items()})


def cd_entropy(t: Theory, beta: Mapping[str, object]) -> dict[str, Fraction] | None:
    """An entropy making ``(eta, beta)`` satisfy every generator, if one exists."""
    b = _beta(t, beta)
    lp = LinearProgram()
    for s in t.states:
        lp.var(eta_var(s))
    for g in t.vectors:
        lp.add({eta_var(s): c for s, c in g.dm.items()}, GE, g.q.dot(b))
    out = solve(lp)
    if isinstance(out, Infeasible):
        return None
    return {s: out.assignment[eta_var(s)] for s in t.states}


def classify_scale(t: Theory, beta: Mapping[str, object]) -> ScaleVerdict:
    gap, cycle = strong_clausius_gap(t, beta)
    eta = cd_entropy(t, beta)
    return ScaleVerdict(clausius(t, beta), gap <= 0, eta is not None, eta,
                        cycle if gap > 0 else None)


@dataclass(frozen=True)
class DensityWitness:
    pair: CDPair
    slack: Fraction


def density_witness(t: Theory, beta0: Mapping[str, object], eps) -> DensityWitness | None:
    """A valid pair whose coldness is within ``eps`` of ``beta0`` in every state.

    Maximizes the smallest coldness; a positive optimum yields the pair.
    """
    b0 = _beta(t, beta0)
    eps = as_rational(eps)
    if eps < 0:
        raise TheoryError("eps must be nonnegative")
    if strong_clausius_gap(t, b0)[0] > 0:
        raise TheoryError("beta0 is not a strong Clausius scale")
    lp = LinearProgram()
    for s in t.states:
        lp.var(eta_var(s))
    for s in t.states:
        lp.var(f"beta[{s}]", lower=b0[s] - eps, upper=b0[s] + eps)
    lp.var("slack")
    for g in t.vectors:
        row = {eta_var(s): c for s, c in g.dm.items()}
        for s, c in g.q.items():
            row[f"beta[{s}]"] = row.get(f"beta[{s}]", 0) - c
        lp.add(row, GE, 0)
    for s in t.states:
        lp.add({f"beta[{s}]": 1, "slack": -1}, GE, 0)
    lp.maximize({"slack": 1})
    out = solve(lp)
    if not isinstance(out, Optimal) or out.value <= 0:
        return None
    x = out.assignment
    pair = CDPair({s: x[eta_var(s)] for s in t.states}, {s: x[f"beta[{s}]"] for s in t.states})
    return DensityWitness(pair, out.value)


# Closed forms for the unsampled quadratic two-state family.

def example_d1_threshold(beta1, beta2) -> Fraction:
    """Least entropy gap ``eta2 - eta1`` that works when ``beta1 > beta2``."""
    b1, b2 = as_rational(beta1), as_rational(beta2)
    return (b1 + b2) ** 2 / (4 * (b1 - b2))


def example_d1_oracle(eta1, eta2, beta1, beta2) -> bool:
    """Exact validity of ``(eta, beta)`` against every member of the quadratic family.

    ``a^2 d - (beta1 + beta2) a + (beta1 - beta2) >= 0`` for all real ``a``,
    with ``d = eta2 - eta1``, holds iff ``beta1 > beta2`` and ``d`` reaches the
    discriminant bound.
    """
    b1, b2 = as_rational(beta1), as_rational(beta2)
    if b1 <= 0 or b2 <= 0:
        raise TheoryError("coldness must be positive")
    if b1 <= b2:
        return False
    return as_rational(eta2) - as_rational(eta1) >= example_d1_threshold(b1, b2)


def classify_example_d1(beta: Mapping[str, object]) -> ScaleVerdict:
    b = _beta(None, beta, ("1", "2"))
    ok_cycle = b["2"] - b["1"] <= 0  # cyclic elements are multiples of (0, -1, 1)
    cd = b["1"] > b["2"]
    eta = {"1": Fraction(0), "2": example_d1_threshold(b["1"], b["2"])} if cd else None
    return ScaleVerdict(ok_cycle, ok_cycle, cd, eta)


def classify_example_d2(beta: Mapping[str, object]) -> ScaleVerdict:
    """Same cone as the d1 family but no true cyclic processes at all."""
    v = classify_example_d1(beta)
    return ScaleVerdict(True, v.strong_clausius, v.clausius_duhem, v.eta)


ANALYTIC = {"example_d1": classify_example_d1, "example_d2": classify_example_d2}


def example_d1_density_witness(beta0: Mapping[str, object], eps) -> CDPair | None:
    """Closed-form density witness for the unsampled family.

    Lowers the second coldness by ``eps`` (or halves it when it is that
    small), which makes ``beta1 > beta2`` and takes the least entropy gap.
    """
    b = _beta(None, beta0, ("1", "2"))
    eps = as_rational(eps)
    b1, b2 = b["1"], b["2"]
    if b1 < b2:
        raise TheoryError("beta0 is not a strong Clausius scale")
    if b1 == b2:
        if eps <= 0:
            return None
        b2 = b2 - eps if b2 > eps else b2 / 2
    pair = CDPair({"1": 0, "2": example_d1_threshold(b1, b2)}, {"1": b1, "2": b2})
    assert example_d1_oracle(0, pair.eta["2"], b1, b2)
    return pair
