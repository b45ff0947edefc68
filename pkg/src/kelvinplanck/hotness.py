"""Hotness relations on a Kelvin-Planck theory.

Two states share a hotness level when heat can pass passively between them
in both directions.  Between levels, "hotter" is decided by adding one
passive transfer and re-running the Kelvin-Planck check; "weakly hotter"
and "strongly hotter" are single LPs over the cone.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Iterable

from .cdsynth import Violating, beta_var, cd_extremize, check_kp, positive_scale, require_kp
from .cone import ConeSystem, MembershipWitness, member
from .core import ZERO, ProcessVector, SignedMeasure, Theory, TheoryError, cyclic
from .ratlp import EQ, Infeasible, Optimal, Unbounded, solve

Level = tuple[str, ...]


class UnionFind:
    def __init__(self, items: Iterable[str]):
        self.parent = {x: x for x in items}

    def find(self, x: str) -> str:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: str, b: str) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


@dataclass(frozen=True)
class HotnessPartition:
    classes: tuple[Level, ...]

    def level_of(self, s: str) -> Level:
        for c in self.classes:
            if s in c:
                return c
        raise TheoryError(f"unknown state {s!r}")


@dataclass(frozen=True)
class OrderReport:
    partition: HotnessPartition
    strict_edges: frozenset[tuple[Level, Level]]
    weak_edges: frozenset[tuple[Level, Level]]
    strong_edges: frozenset[tuple[Level, Level]]

    def is_total(self) -> bool:
        cs = self.partition.classes
        return all((a, b) in self.strict_edges or (b, a) in self.strict_edges
                   for i, a in enumerate(cs) for b in cs[i + 1:])

    def chain_holds(self) -> bool:
        return self.strong_edges <= self.strict_edges <= self.weak_edges

    def strict_is_order(self) -> bool:
        e = self.strict_edges
        if any(a == b for a, b in e):
            return False
        return all((a, d) in e for a, b in e for c, d in e if b == c)


@dataclass(frozen=True)
class WeakWitness:
    mu_hot: SignedMeasure
    mu_cold: SignedMeasure
    nu: SignedMeasure
    witness: MembershipWitness

    @property
    def heat(self) -> SignedMeasure:
        return self.mu_hot - self.mu_cold + self.nu


def transfer(frm: str, to: str) -> ProcessVector:
    """Passive heat transfer: heat absorbed at ``frm`` and emitted at ``to``."""
    if frm == to:
        return ZERO
    return cyclic({frm: 1, to: -1})


def same_hotness(t: Theory, a: str, b: str) -> tuple[MembershipWitness, MembershipWitness] | None:
    require_kp(t)
    t.states.check((a, b))
    w1 = member(t, transfer(a, b))
    if w1 is None:
        return None
    w2 = member(t, transfer(b, a))
    return None if w2 is None else (w1, w2)


def partition(t: Theory) -> HotnessPartition:
    require_kp(t)
    uf = UnionFind(t.states)
    labels = t.states.labels
    for i, a in enumerate(labels):
        for b in labels[i + 1:]:
            if uf.find(a) != uf.find(b) and same_hotness(t, a, b):
                uf.union(a, b)
    groups: dict[str, list[str]] = {}
    for s in labels:
        groups.setdefault(uf.find(s), []).append(s)
    return HotnessPartition(tuple(tuple(g) for g in groups.values()))


def _levels(t: Theory, hot: Iterable[str], cold: Iterable[str]) -> tuple[Level, Level]:
    h1, h0 = t.states.sort(set(hot)), t.states.sort(set(cold))
    if not h1 or not h0:
        raise TheoryError("hotness levels must be nonempty")
    if set(h1) & set(h0):
        raise TheoryError("hotness levels must be distinct")
    return h1, h0


def hotter_certificate(t: Theory, hot: Iterable[str], cold: Iterable[str]) -> Violating | None:
    """Violation produced by letting heat pass from ``cold`` to ``hot``, if any."""
    require_kp(t)
    h1, h0 = _levels(t, hot, cold)
    verdict = check_kp(t.extend([transfer(h0[0], h1[0])]))
    return verdict if isinstance(verdict, Violating) else None


def hotter_than(t: Theory, hot: Iterable[str], cold: Iterable[str]) -> bool:
    return hotter_certificate(t, hot, cold) is not None


def _weak_system(t: Theory, hot: Level, cold: Level) -> tuple[ConeSystem, dict, dict, dict]:
    sys = ConeSystem(t)
    lp = sys.lp
    mu1 = {s: lp.var(f"mu_hot[{s}]", lower=0) for s in hot}
    mu0 = {s: lp.var(f"mu_cold[{s}]", lower=0) for s in cold}
    nu = {s: lp.var(f"nu[{s}]", lower=0) for s in t.states}
    lp.add({v: 1 for v in mu1.values()}, EQ, 1)
    lp.add({v: 1 for v in mu0.values()}, EQ, 1)
    terms = {}
    for s in t.states:
        row = {nu[s]: Fraction(1)}
        if s in mu1:
            row[mu1[s]] = Fraction(1)
        if s in mu0:
            row[mu0[s]] = Fraction(-1)
        terms[s] = row
    sys.require(ZERO, q_terms=terms)
    return sys, mu1, mu0, nu


def _measure(x, names: dict) -> SignedMeasure:
    return SignedMeasure({s: x[v] for s, v in names.items()})


def weakly_hotter(t: Theory, hot: Iterable[str], cold: Iterable[str]) -> WeakWitness | None:
    require_kp(t)
    h1, h0 = _levels(t, hot, cold)
    sys, mu1, mu0, nu = _weak_system(t, h1, h0)
    out = sys.solve()
    if isinstance(out, Infeasible):
        return None
    x = out.assignment
    return WeakWitness(_measure(x, mu1), _measure(x, mu0), _measure(x, nu), sys.witness(0, x))


def strongly_hotter(t: Theory, hot: Iterable[str], cold: Iterable[str]) -> WeakWitness | None:
    """Like ``weakly_hotter`` but the extra heat ``nu`` must be nonzero."""
    require_kp(t)
    h1, h0 = _levels(t, hot, cold)
    sys, mu1, mu0, nu = _weak_system(t, h1, h0)
    sys.lp.maximize({v: 1 for v in nu.values()})
    out = sys.solve()
    if isinstance(out, Infeasible) or (isinstance(out, Optimal) and out.value <= 0):
        return None
    x = out.point if isinstance(out, Unbounded) else out.assignment
    if isinstance(out, Unbounded):
        x = {v: x[v] + out.ray[v] for v in x}
    return WeakWitness(_measure(x, mu1), _measure(x, mu0), _measure(x, nu), sys.witness(0, x))


def order_report(t: Theory) -> OrderReport:
    part = partition(t)
    strict, weak, strong = set(), set(), set()
    for a, b in permutations(part.classes, 2):
        if weakly_hotter(t, a, b):
            weak.add((a, b))
        if hotter_than(t, a, b):
            strict.add((a, b))
        if strongly_hotter(t, a, b):
            strong.add((a, b))
    return OrderReport(part, frozenset(strict), frozenset(weak), frozenset(strong))


def coldness_gap_range(t: Theory, a: str, b: str) -> tuple[Fraction, Fraction]:
    """Min and max of ``beta[a] - beta[b]`` over the closed relaxation of normalized scales."""
    obj = {beta_var(a): 1, beta_var(b): -1} if a != b else {}
    lo = cd_extremize(t, obj, sense="min")
    hi = cd_extremize(t, obj, sense="max")
    return lo.value, hi.value


def equal_on_every_scale(t: Theory, a: str, b: str) -> bool:
    """Scale-side test for equal hotness: the coldness gap is identically zero.

    Zero range over the relaxation is confirmed by exhibiting a strictly
    positive scale with ``beta[a] = beta[b]``.
    """
    lo, hi = coldness_gap_range(t, a, b)
    if lo != 0 or hi != 0:
        return False
    eq = [({beta_var(a): 1, beta_var(b): -1}, EQ, 0)] if a != b else []
    return positive_scale(t, eq) is not None


def weakly_hotter_by_scales(t: Theory, hot: str, cold: str) -> bool:
    """Scale-side test: ``T(hot) >= T(cold)`` on every scale, i.e. min of ``beta[cold] - beta[hot]`` >= 0."""
    lo, _ = coldness_gap_range(t, cold, hot)
    return lo >= 0
