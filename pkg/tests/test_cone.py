import random
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from kelvinplanck.cone import MembershipWitness, Separator, contains_subspace, member, member_free, query
from kelvinplanck.core import ProcessVector, cyclic, make_theory
from kelvinplanck.fixtures import builtin, xq
from kelvinplanck.selftest import random_theory


def test_generator_is_a_member_with_unit_weight():
    t = builtin("halfspace")
    w = member(t, xq(2, 1, 0))
    assert w is not None and w.verify(t, xq(2, 1, 0))


def test_outside_vector_gets_a_separator():
    t = builtin("halfspace")
    target = cyclic({"1": 1})
    found = query(t, target)
    assert isinstance(found, Separator)
    assert found.verify(t, target)


def test_free_heat_completion():
    t = builtin("halfspace")
    found = member_free(t, ProcessVector(), ["1"], nonneg=True)
    assert found is not None
    w, extra = found
    assert extra["1"] >= 0
    assert w.verify(t, ProcessVector({}, extra))


def test_subspace_containment():
    t = builtin("halfspace")
    assert contains_subspace(t, [xq(2, 1, 0), xq(1, 0, 1)])
    assert not contains_subspace(t, [cyclic({"1": 1})])


def test_witness_verification_rejects_negative_weights():
    t = make_theory(["a", "b"], [({}, {"a": 1, "b": -1})])
    w = MembershipWitness({0: Fraction(-1)})
    assert not w.verify(t, cyclic({"a": -1, "b": 1}))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32), st.lists(st.fractions(0, 3, max_denominator=4), min_size=6, max_size=6))
def test_property_nonnegative_combinations_are_members(seed, weights):
    t = random_theory(random.Random(seed))
    target = ProcessVector()
    for c, g in zip(weights, t.vectors):
        target = target + g.scale(c)
    w = member(t, target)
    assert w is not None and w.verify(t, target)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_property_query_always_certifies(seed):
    rng = random.Random(seed)
    t = random_theory(rng)
    s = t.states.labels
    target = ProcessVector({s[0]: 1, s[1]: -1}, {s[2]: rng.randint(-2, 2)})
    found = query(t, target)
    assert found.verify(t, target)
