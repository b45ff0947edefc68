import functools
import random
from fractions import Fraction

from kelvinplanck.cdsynth import cd_feasible, require_kp
from kelvinplanck.cone import member
from kelvinplanck.core import CDPair, ProcessVector, SignedMeasure, StateSpace, Theory, cyclic
from kelvinplanck.fixtures import HALFSPACE_PAIR, builtin, halfspace
from kelvinplanck.ratlp import EQ, LinearProgram, solve
from kelvinplanck.selftest import check_pair_uniqueness, check_temp_uniqueness, kp_corpus
from kelvinplanck.uniqueness import (cd_pair_unique, complete_to_cone, entropy_unique, find_carnot,
                                     halfspace_equals, hyperplane_basis, nullspace, proportional_on,
                                     q_set_coincides, reversible_connect, temp_unique)

EMPTY = Theory(StateSpace(("1", "2")))


@functools.lru_cache(maxsize=None)
def corpus():
    return tuple(kp_corpus(23, 40))


def strict_free_halfspace():
    t = halfspace()
    return Theory(t.states, t.generators[:4])


def test_carnot_on_halfspace():
    c = find_carnot(builtin("halfspace"), "2", "1")
    assert c is not None and c.ratio == 2 and c.verify(builtin("halfspace"))


def test_no_carnot_on_d1_or_empty():
    assert find_carnot(builtin("example_d1"), "2", "1") is None
    assert find_carnot(EMPTY, "2", "1") is None


def test_temp_unique_verdicts():
    assert temp_unique(builtin("halfspace")).unique
    assert temp_unique(builtin("example_d1"), ["1"]).unique
    v = temp_unique(builtin("example_d1"))
    assert not v.unique
    p1, p2 = v.pairs
    t = builtin("example_d1")
    assert cd_feasible(t, p1) and cd_feasible(t, p2)
    assert not proportional_on(p1, p2, ["1", "2"])


def test_reversible_connect():
    t = builtin("halfspace")
    same = reversible_connect(t, "1", "1")
    assert same is not None and not same.q
    c = reversible_connect(t, "2", "1")
    assert c is not None and c.verify(t)
    assert 2 * c.q["1"] + c.q["2"] == 1
    assert reversible_connect(builtin("example_d1"), "2", "1") is None


def test_hyperplane_basis_dimension():
    basis = hyperplane_basis(builtin("halfspace"), HALFSPACE_PAIR)
    assert len(basis) == 2
    assert all(HALFSPACE_PAIR.inequality(b) == 0 for b in basis)
    assert len(nullspace([[Fraction(1), Fraction(1)]], 2)) == 1


def test_pair_uniqueness_verdicts():
    assert cd_pair_unique(builtin("halfspace"), HALFSPACE_PAIR)
    d1 = builtin("example_d1")
    assert not cd_pair_unique(d1, require_kp(d1).pair)
    any_pair = CDPair({"1": 0, "2": 0}, {"1": 1, "2": 1})
    assert not cd_pair_unique(EMPTY, any_pair)


def test_halfspace_equality():
    assert halfspace_equals(builtin("halfspace"), HALFSPACE_PAIR)
    assert not halfspace_equals(strict_free_halfspace(), HALFSPACE_PAIR)
    assert cd_pair_unique(strict_free_halfspace(), HALFSPACE_PAIR)
    d1 = builtin("example_d1")
    assert not halfspace_equals(d1, require_kp(d1).pair)


def test_q_set():
    assert q_set_coincides(builtin("halfspace"))
    assert not q_set_coincides(builtin("example_d1"))
    assert not q_set_coincides(EMPTY)


def test_complete_to_cone():
    t = builtin("halfspace")
    g = t.generators[0].vector
    assert complete_to_cone(t, g.dm, g.q) == SignedMeasure()
    inside = ProcessVector({"1": -1, "2": 1}, {"1": -1})
    assert HALFSPACE_PAIR.inequality(inside) > 0
    assert complete_to_cone(t, inside.dm, inside.q) == SignedMeasure()
    # nu = -w always completes a nonpositive cyclic target to the apex
    assert complete_to_cone(EMPTY, SignedMeasure(), SignedMeasure({"1": -1})) == {"1": 1}
    assert complete_to_cone(EMPTY, SignedMeasure({"1": 1, "2": -1}), SignedMeasure()) is None


def test_entropy_uniqueness():
    t = builtin("halfspace")
    other = CDPair({"1": 5, "2": 6}, HALFSPACE_PAIR.beta)
    v = entropy_unique(t, HALFSPACE_PAIR, other=other)
    assert v.unique and v.offset == 5
    d1 = builtin("example_d1")
    pair = require_kp(d1).pair
    v = entropy_unique(d1, pair)
    assert not v.unique
    c = v.counterexample
    assert c is not None and cd_feasible(d1, c)
    assert c.beta == pair.beta
    assert c.eta["2"] - c.eta["1"] != pair.eta["2"] - pair.eta["1"]


def test_property_carnot_and_scale_side_agree():
    for t in corpus():
        assert check_temp_uniqueness(t) == []


def test_property_pair_uniqueness_agrees():
    for t in corpus():
        assert check_pair_uniqueness(t) == []


def _unique_cases():
    return [t for t in corpus() if temp_unique(t).unique] + [builtin("halfspace")]


def _random_q(rng, t, beta, sign):
    """Random q with <beta, q> of the given sign (0, or negative)."""
    s = t.states.labels
    q = {x: Fraction(rng.randint(-3, 3)) for x in s[1:]}
    value = -sum(beta[x] * v for x, v in q.items())
    if sign < 0:
        value -= rng.randint(1, 3)
    q[s[0]] = value / beta[s[0]]
    return q


def test_property_unique_scale_makes_tight_cycles_reversible():
    rng = random.Random(5)
    for t in _unique_cases():
        beta = require_kp(t).pair.beta
        for _ in range(5):
            q = _random_q(rng, t, beta, 0)
            assert member(t, cyclic(q)) is not None


def test_property_strict_cycles_all_or_nothing():
    rng = random.Random(6)
    for t in _unique_cases():
        beta = require_kp(t).pair.beta
        hits = {member(t, cyclic(_random_q(rng, t, beta, -1))) is not None for _ in range(20)}
        assert len(hits) == 1


def test_property_reversible_cycles_are_carnot_combinations():
    rng = random.Random(7)
    for t in _unique_cases():
        beta = require_kp(t).pair.beta
        labels = t.states.labels
        carnots = [find_carnot(t, s, labels[0]) for s in labels[1:]]
        q = _random_q(rng, t, beta, 0)
        lp = LinearProgram()
        ks = [lp.var(f"k{i}") for i in range(len(carnots))]
        for s in labels:
            lp.add({k: c.vector.q[s] for k, c in zip(ks, carnots)}, EQ, q[s])
        assert solve(lp).kind == "feasible"
