"""Random corpora and property checks shared by the test suite and ``kelvinplanck selftest``.

Every check compares two independently computed answers and returns a list
of human-readable mismatch descriptions (empty when they agree).
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .cdsynth import Compliant, check_kp, require_kp
from .core import Generator, ProcessVector, StateSpace, Theory
from .fixtures import BUILTINS, builtin
from .fourier_motzkin import fm_solve
from .hotness import equal_on_every_scale, same_hotness
from .ratlp import EQ, GE, LE, LinearProgram, check_certificate, solve
from .uniqueness import cd_pair_unique, find_carnot, reversible_connect, scales_proportional

COEFF = 3


def _rat(rng: random.Random, lo: int = -COEFF, hi: int = COEFF) -> Fraction:
    if rng.random() < 0.75:
        return Fraction(rng.randint(lo, hi))
    den = rng.choice((2, 3))
    return Fraction(rng.randint(lo * den, hi * den), den)


def random_lp(rng: random.Random) -> LinearProgram:
    """At most 6 variables and 10 constraints, mixing bounded, free and boxed variables."""
    lp = LinearProgram()
    n = rng.randint(1, 6)
    names = [f"x{i}" for i in range(n)]
    for v in names:
        kind = rng.random()
        if kind < 0.5:
            lp.var(v, lower=0)
        elif kind < 0.7:
            lp.var(v, lower=rng.randint(-2, 1), upper=rng.randint(2, 4))
        else:
            lp.var(v)
    budget = 10 - len(lp.lower) - len(lp.upper)  # bound rows count as constraints
    for _ in range(rng.randint(0, max(0, min(budget, 6)))):
        coeffs = {v: _rat(rng) for v in rng.sample(names, rng.randint(1, n))}
        rel = rng.choices((LE, GE, EQ), weights=(5, 3, 1))[0]
        rhs = Fraction(rng.randint(0, 6)) if rel == LE else Fraction(rng.randint(-6, 2))
        lp.add(coeffs, rel, rhs)
    if rng.random() < 0.85:
        obj = {v: _rat(rng) for v in names}
        (lp.maximize if rng.random() < 0.5 else lp.minimize)(obj)
    return lp


def check_lp(lp: LinearProgram) -> list[str]:
    out = solve(lp)
    oracle = fm_solve(lp)
    problems = []
    if out.kind != oracle.status:
        problems.append(f"simplex says {out.kind}, elimination says {oracle.status}")
    elif out.kind == "optimal" and out.value != oracle.value:
        problems.append(f"optimal values differ: {out.value} vs {oracle.value}")
    if not check_certificate(lp, out):
        problems.append(f"{out.kind} certificate does not verify")
    return problems


def _zero_sum(rng: random.Random, n: int) -> list[Fraction]:
    dm = [_rat(rng) for _ in range(n - 1)]
    last = -sum(dm)
    if abs(last) > COEFF:
        dm = [Fraction(0)] * (n - 1)
        last = Fraction(0)
    k = rng.randrange(n)
    dm.insert(k, last)
    return dm


def random_theory(rng: random.Random) -> Theory:
    """Uniformly drawn generators; often not Kelvin-Planck."""
    n = rng.randint(3, 4)
    labels = tuple(f"s{i}" for i in range(n))
    gens = []
    for _ in range(rng.randint(1, 6)):
        dm = _zero_sum(rng, n) if rng.random() < 0.7 else [Fraction(0)] * n
        q = [_rat(rng) for _ in range(n)]
        gens.append(Generator(ProcessVector(dict(zip(labels, dm)), dict(zip(labels, q)))))
    return Theory(StateSpace(labels), tuple(gens))


def structured_theory(rng: random.Random) -> Theory:
    """Generators obeying a hidden pair; some tight in both directions.

    Tight reversible pairs, positively spanning sets of tight cycles and
    heat transfers between states make equal hotness, Carnot elements and
    unique scales common.  Each vector is shrunk so no coefficient exceeds 3.
    """
    n = rng.randint(3, 4)
    labels = tuple(f"s{i}" for i in range(n))
    beta = [Fraction(rng.randint(1, 3)) for _ in range(n)]
    eta = [Fraction(rng.randint(-2, 2)) for _ in range(n)]
    zero = [Fraction(0)] * n
    gens: list[Generator] = []

    def slack(dm, q):
        return sum(e * d for e, d in zip(eta, dm)) - sum(b * x for b, x in zip(beta, q))

    def push(dm, q):
        big = max(abs(x) for x in list(dm) + list(q))
        if big > COEFF:
            dm, q = [x * COEFF / big for x in dm], [x * COEFF / big for x in q]
        gens.append(Generator(ProcessVector(dict(zip(labels, dm)), dict(zip(labels, q)))))

    def spanning(basis):
        for dm, q in basis:
            push(dm, q)
        push([-sum(v[i] for v, _ in basis) for i in range(n)], [-sum(w[i] for _, w in basis) for i in range(n)])

    def carnot(k, ref):
        q = list(zero)
        q[k], q[ref] = beta[ref], -beta[k]
        return list(zero), q

    mode = rng.random()
    if mode < 0.25:
        group = rng.sample(range(n), rng.randint(2, n))
        spanning([carnot(k, group[0]) for k in group[1:]])
    elif mode < 0.4 and n == 3:
        basis = [carnot(1, 0), carnot(2, 0)]
        for k in (1, 2):
            dm = list(zero)
            dm[k], dm[0] = Fraction(1), Fraction(-1)
            q = list(zero)
            q[0] = (eta[k] - eta[0]) / beta[0]
            basis.append((dm, q))
        spanning(basis)
        q = list(zero)
        q[rng.randrange(n)] = Fraction(-1)
        push(zero, q)

    target = max(len(gens), rng.randint(2, 6))
    while len(gens) < target:
        kind = rng.random()
        if kind < 0.35 and len(gens) <= 4:
            # reversible pair: tight cyclic or non-cyclic element and its negative
            dm = _zero_sum(rng, n) if rng.random() < 0.5 else list(zero)
            q = list(zero)
            i, j = rng.sample(range(n), 2)
            q[i] = _rat(rng, 1, COEFF)
            q[j] = (sum(e * d for e, d in zip(eta, dm)) - beta[i] * q[i]) / beta[j]
            push(dm, q)
            push([-x for x in dm], [-x for x in q])
        elif kind < 0.5:
            i, j = rng.sample(range(n), 2)
            if beta[i] > beta[j]:
                i, j = j, i
            q = list(zero)
            q[i], q[j] = Fraction(1), Fraction(-1)  # absorbed at the hotter state
            push(zero, q)
        else:
            dm = _zero_sum(rng, n)
            q = [_rat(rng) for _ in range(n)]
            if slack(dm, q) < 0:
                dm, q = [-x for x in dm], [-x for x in q]
            push(dm, q)
    return Theory(StateSpace(labels), tuple(gens[:6]))


def kp_corpus(seed: int, size: int = 200) -> list[Theory]:
    """``size`` Kelvin-Planck theories, half structured and half uniformly drawn."""
    rng = random.Random(seed)
    out: list[Theory] = []
    attempts = 0
    while len(out) < size:
        attempts += 1
        make = structured_theory if len(out) % 2 == 0 or attempts > 50 * size else random_theory
        t = make(rng)
        if isinstance(check_kp(t), Compliant):
            out.append(t)
    return out


def fixture_theories() -> list[Theory]:
    return [builtin(name) for name in sorted(BUILTINS)]


def check_same_hotness(t: Theory) -> list[str]:
    """Membership of both transfers versus coinciding coldness on every scale."""
    problems = []
    labels = t.states.labels
    for i, a in enumerate(labels):
        for b in labels[i + 1:]:
            by_cone = same_hotness(t, a, b) is not None
            by_scales = equal_on_every_scale(t, a, b)
            if by_cone != by_scales:
                problems.append(f"{a},{b}: cone says {by_cone}, scales say {by_scales}")
    return problems


def check_temp_uniqueness(t: Theory) -> list[str]:
    """Pinned coldness ratios versus Carnot elements between every pair."""
    labels = t.states.labels
    carnot = all(find_carnot(t, b, a) is not None for i, a in enumerate(labels) for b in labels[i + 1:])
    pinned = scales_proportional(t)
    return [] if carnot == pinned else [f"Carnot for all pairs: {carnot}, ratios pinned: {pinned}"]


def check_pair_uniqueness(t: Theory) -> list[str]:
    """Hyperplane inside the cone versus reversible and Carnot links between every pair."""
    pair = require_kp(t).pair
    labels = t.states.labels
    pairs = [(a, b) for i, a in enumerate(labels) for b in labels[i + 1:]]
    linked = all(reversible_connect(t, b, a) is not None and find_carnot(t, b, a) is not None
                 for a, b in pairs)
    by_hyperplane = cd_pair_unique(t, pair)
    return [] if linked == by_hyperplane else [f"linked: {linked}, hyperplane in cone: {by_hyperplane}"]


CHECKS: dict[str, Callable[[Theory], list[str]]] = {
    "same_hotness": check_same_hotness,
    "temp_uniqueness": check_temp_uniqueness,
    "pair_uniqueness": check_pair_uniqueness,
}


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def run_theory_check(name: str, theories: Iterable[Theory]) -> SuiteResult:
    res = SuiteResult(name)
    for k, t in enumerate(theories):
        res.cases += 1
        res.failures += [f"case {k}: {p}" for p in CHECKS[name](t)]
    return res


def run_lp_check(seed: int, size: int = 200) -> SuiteResult:
    rng = random.Random(seed)
    res = SuiteResult("lp_vs_elimination")
    for k in range(size):
        res.cases += 1
        res.failures += [f"case {k}: {p}" for p in check_lp(random_lp(rng))]
    return res


def run_all(seed: int = 0, size: int = 200) -> list[SuiteResult]:
    theories = kp_corpus(seed, size) + fixture_theories()
    return [run_lp_check(seed, size)] + [run_theory_check(n, theories) for n in CHECKS]
