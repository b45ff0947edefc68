"""Carnot elements, reversible connections and essential uniqueness of scales.

A temperature scale is unique up to a positive factor exactly when every
pair of states is linked by a reversible cyclic element (a Carnot element).
An entropy/coldness pair is unique up to those symmetries exactly when the
cone contains the whole hyperplane on which the pair is tight.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .cdsynth import (Compliant, beta_var, cd_feasible, cd_extremize, cd_program, eta_var,
                      pair_from, require_kp)
from .cone import ConeSystem, MembershipWitness, contains_subspace, member
from .core import (ZERO, CDPair, ProcessVector, SignedMeasure, Theory, TheoryError, check_vector, cyclic,
                   total)
from .ratlp import EQ, GE, Infeasible, Optimal, Unbounded, solve


@dataclass(frozen=True)
class CarnotElement:
    hot: str
    cold: str
    c_hot: Fraction
    c_cold: Fraction
    forward: MembershipWitness
    backward: MembershipWitness

    @property
    def vector(self) -> ProcessVector:
        return cyclic({self.hot: self.c_hot, self.cold: -self.c_cold})

    @property
    def ratio(self) -> Fraction:
        """``c_hot / c_cold``, which equals ``T(hot) / T(cold)`` on every scale."""
        return self.c_hot / self.c_cold

    def verify(self, t: Theory) -> bool:
        return (self.c_hot > 0 and self.c_cold > 0 and self.c_hot + self.c_cold == 1
                and self.forward.verify(t, self.vector) and self.backward.verify(t, -self.vector))


@dataclass(frozen=True)
class ReversibleConnection:
    hot: str
    cold: str
    q: SignedMeasure
    forward: MembershipWitness
    backward: MembershipWitness

    @property
    def vector(self) -> ProcessVector:
        dm = {} if self.hot == self.cold else {self.hot: 1, self.cold: -1}
        return ProcessVector(dm, self.q)

    def verify(self, t: Theory, support: Iterable[str] | None = None) -> bool:
        if support is not None and not self.q.support() <= set(support):
            return False
        return self.forward.verify(t, self.vector) and self.backward.verify(t, -self.vector)


@dataclass(frozen=True)
class TempVerdict:
    unique: bool
    evidence: tuple[CarnotElement, ...] = ()
    pairs: tuple[CDPair, CDPair] | None = None
    failed: tuple[str, str] | None = None


@dataclass(frozen=True)
class EntropyVerdict:
    unique: bool
    connections: tuple[ReversibleConnection, ...] = ()
    counterexample: CDPair | None = None
    offset: Fraction | None = None


def find_carnot(t: Theory, hot: str, cold: str) -> CarnotElement | None:
    if hot == cold:
        raise TheoryError("a Carnot element needs two distinct states")
    require_kp(t)
    t.states.check((hot, cold))
    sys = ConeSystem(t)
    lp = sys.lp
    c1, c0, u = lp.var("c_hot", lower=0), lp.var("c_cold", lower=0), lp.var("u")
    lp.add({c1: 1, c0: 1}, EQ, 1)
    lp.add({c1: 1, u: -1}, GE, 0)
    lp.add({c0: 1, u: -1}, GE, 0)
    terms = {hot: {c1: Fraction(1)}, cold: {c0: Fraction(-1)}}
    sys.require(ZERO, q_terms=terms)
    sys.require(ZERO, q_terms=terms, sign=-1)
    lp.maximize({u: 1})
    out = sys.solve()
    if not isinstance(out, Optimal) or out.value <= 0:
        return None
    x = out.assignment
    return CarnotElement(hot, cold, x[c1], x[c0], sys.witness(0, x), sys.witness(1, x))


def _subdomain(t: Theory, subdomain: Iterable[str] | None) -> tuple[str, ...]:
    if subdomain is None:
        return t.states.labels
    labels = t.states.sort(set(subdomain))
    return labels


def scales_proportional(t: Theory, subdomain: Iterable[str] | None = None) -> bool:
    """Scale-side uniqueness test: every coldness ratio to the reference state is pinned.

    Uses a known positive scale ``b0`` and checks that ``beta[s] - r * beta[ref]``
    with ``r = b0[s] / b0[ref]`` vanishes on the whole closed relaxation.
    """
    labels = _subdomain(t, subdomain)
    b0 = require_kp(t).pair.beta
    ref = labels[0]
    for s in labels[1:]:
        obj = {beta_var(s): 1, beta_var(ref): -b0[s] / b0[ref]}
        for sense in ("max", "min"):
            if cd_extremize(t, obj, sense=sense).value != 0:
                return False
    return True


def _disagreeing_pairs(t: Theory, ref: str, s: str) -> tuple[CDPair, CDPair]:
    base: Compliant = require_kp(t)
    b0 = base.pair.beta
    obj = {beta_var(s): 1, beta_var(ref): -b0[s] / b0[ref]}
    for sense in ("max", "min"):
        out = cd_extremize(t, obj, sense=sense)
        if out.value != 0:
            eta, beta = pair_from(t, out.assignment)
            half = Fraction(1, 2)
            mixed = CDPair({k: half * (eta[k] + base.pair.eta[k]) for k in eta},
                           {k: half * (beta[k] + b0[k]) for k in beta})
            return base.pair, mixed
    raise RuntimeError(f"no Carnot element for ({s}, {ref}) yet the coldness ratio is pinned")


def temp_unique(t: Theory, subdomain: Iterable[str] | None = None, pairwise: bool = False) -> TempVerdict:
    """Essential uniqueness of the temperature scale restricted to ``subdomain``.

    By default only the reference state (lowest index) is linked to the
    others; being Carnot-linked is transitive.  ``pairwise`` checks every pair.
    """
    require_kp(t)
    labels = _subdomain(t, subdomain)
    if pairwise:
        todo = [(a, b) for i, a in enumerate(labels) for b in labels[i + 1:]]
    else:
        todo = [(labels[0], b) for b in labels[1:]]
    evidence = []
    for a, b in todo:
        found = find_carnot(t, b, a)
        if found is None:
            return TempVerdict(False, pairs=_disagreeing_pairs(t, a, b), failed=(b, a))
        evidence.append(found)
    return TempVerdict(True, tuple(evidence))


def proportional_on(p1: CDPair, p2: CDPair, labels: Sequence[str]) -> bool:
    ref = labels[0]
    return all(p1.beta[s] * p2.beta[ref] == p2.beta[s] * p1.beta[ref] for s in labels)


def reversible_connect(t: Theory, hot: str, cold: str,
                       support: Iterable[str] | None = None) -> ReversibleConnection | None:
    """Reversible element with change of condition ``dirac(hot) - dirac(cold)``; heat confined to ``support``."""
    require_kp(t)
    t.states.check((hot, cold))
    free = t.states.labels if support is None else t.states.sort(set(support))
    dm = ProcessVector({} if hot == cold else {hot: 1, cold: -1}, {})
    sys = ConeSystem(t)
    qv = {s: sys.lp.var(f"q[{s}]") for s in free}
    terms = {s: {v: Fraction(1)} for s, v in qv.items()}
    sys.require(dm, q_terms=terms)
    sys.require(dm, q_terms=terms, sign=-1)
    out = sys.solve()
    if isinstance(out, Infeasible):
        return None
    x = out.assignment
    q = SignedMeasure({s: x[v] for s, v in qv.items()})
    return ReversibleConnection(hot, cold, q, sys.witness(0, x), sys.witness(1, x))


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Rational basis of ``{x : rows @ x = 0}`` by reduced row echelon form."""
    m = [list(map(Fraction, r)) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pv = m[r][c]
        m[r] = [v / pv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    basis = []
    for fcol in (c for c in range(ncols) if c not in pivots):
        v = [Fraction(0)] * ncols
        v[fcol] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fcol]
        basis.append(v)
    return basis


def hyperplane_basis(t: Theory, pair: CDPair) -> list[ProcessVector]:
    """Basis of ``{(dm, q) : total(dm) = 0, <eta, dm> = <beta, q>}``."""
    labels = t.states.labels
    n = len(labels)
    rows = [[1] * n + [0] * n,
            [pair.eta[s] for s in labels] + [-pair.beta[s] for s in labels]]
    return [ProcessVector(zip(labels, v[:n]), zip(labels, v[n:])) for v in nullspace(rows, 2 * n)]


def _require_feasible(t: Theory, pair: CDPair) -> None:
    if not cd_feasible(t, pair):
        raise TheoryError("pair violates the entropy inequality on some generator")


def cd_pair_unique(t: Theory, pair: CDPair) -> bool:
    _require_feasible(t, pair)
    return contains_subspace(t, hyperplane_basis(t, pair))


def halfspace_equals(t: Theory, pair: CDPair) -> bool:
    _require_feasible(t, pair)
    if not cd_pair_unique(t, pair):
        return False
    return any(member(t, cyclic({s: -1})) is not None for s in t.states)


def q_set_coincides(t: Theory) -> bool:
    require_kp(t)
    return all(member(t, cyclic({s: -1})) is not None for s in t.states)


def complete_to_cone(t: Theory, v: SignedMeasure, w: SignedMeasure,
                     pairs: Iterable[CDPair] = ()) -> SignedMeasure | None:
    """Least total ``nu >= 0`` with ``(v, w + nu)`` in the cone, or None."""
    if total(v) != 0:
        raise TheoryError("mass change must have total zero")
    target = ProcessVector(v, w)
    check_vector(t, target)
    for p in pairs:
        if p.inequality(target) < 0:
            raise TheoryError("target violates a supplied pair's inequality")
    sys = ConeSystem(t)
    nu = {s: sys.lp.var(f"nu[{s}]", lower=0) for s in t.states}
    sys.require(target, q_terms={s: {x: Fraction(1)} for s, x in nu.items()})
    sys.lp.minimize({x: 1 for x in nu.values()})
    out = sys.solve()
    if isinstance(out, Infeasible):
        return None
    return SignedMeasure({s: out.assignment[x] for s, x in nu.items()})


def entropy_unique(t: Theory, pair: CDPair, subdomain: Iterable[str] | None = None,
                   other: CDPair | None = None) -> EntropyVerdict:
    """Is entropy on ``subdomain`` fixed up to a constant once coldness there is fixed?

    Decided by reversible connections with heat confined to the subdomain.
    On "no", a second feasible pair with the same coldness on the subdomain
    and a different entropy difference is constructed when possible.  On
    "yes" with ``other`` given, the constant offset ``other.eta - pair.eta``
    is reported.
    """
    _require_feasible(t, pair)
    labels = _subdomain(t, subdomain)
    ref = labels[0]
    conns = []
    for s in labels[1:]:
        c = reversible_connect(t, s, ref, support=labels)
        if c is None:
            return EntropyVerdict(False, tuple(conns), _second_entropy(t, pair, labels, ref, s))
        conns.append(c)
    offset = None
    if other is not None and all(other.beta[s] == pair.beta[s] for s in labels):
        diffs = {other.eta[s] - pair.eta[s] for s in labels}
        offset = diffs.pop() if len(diffs) == 1 else None
    return EntropyVerdict(True, tuple(conns), offset=offset)


def _second_entropy(t: Theory, pair: CDPair, labels, ref: str, s: str) -> CDPair | None:
    fixed = [({beta_var(u): 1}, EQ, pair.beta[u]) for u in labels]
    d0 = pair.eta[s] - pair.eta[ref]
    obj = {eta_var(s): 1, eta_var(ref): -1}
    for sense in ("max", "min"):
        lp = cd_program(t, fixed, normalize=False)
        (lp.maximize if sense == "max" else lp.minimize)(obj)
        out = solve(lp)
        if isinstance(out, Infeasible):
            return None
        if isinstance(out, Unbounded):
            gain = lp.objective_value(out.ray)
            k = max(Fraction(1), abs(d0 - lp.objective_value(out.point)) / abs(gain) + 1)
            x = {v: out.point[v] + k * out.ray[v] for v in out.point}
        elif out.value != d0:
            x = out.assignment
        else:
            continue
        eta, beta = pair_from(t, x)
        half = Fraction(1, 2)
        return CDPair({u: half * (eta[u] + pair.eta[u]) for u in eta},
                      {u: half * (beta[u] + pair.beta[u]) for u in beta})
    return None
