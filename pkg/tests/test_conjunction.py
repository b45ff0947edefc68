from fractions import Fraction

import pytest

from kelvinplanck.cdsynth import Violating, check_kp
from kelvinplanck.conjunction import (PART1, PART2, PreconditionError, comparability_conditions, conjoin,
                                      consistency_check, imparted_order, imparted_scale, is_thermometer,
                                      joint_theory)
from kelvinplanck.core import StateSpace, Theory, TheoryError, relabel, total
from kelvinplanck.fixtures import builtin, halfspace_thermometer, target_pair
from kelvinplanck.hotness import same_hotness
from kelvinplanck.uniqueness import temp_unique

def thermo(prefix, contacts=(("x", 1), ("y", 2))):
    return conjoin(target_pair(), halfspace_thermometer(prefix), [(s, f"{prefix}{k}") for s, k in contacts])


def test_conjoin_empty_theories():
    c = conjoin(Theory(StateSpace(("p",))), Theory(StateSpace(("r",))), [])
    assert c.theory.generators == ()


def test_embedded_generators_keep_part_sums():
    d1 = builtin("example_d1")
    c = conjoin(d1, halfspace_thermometer("h"), [("1", "h1"), ("2", "h2")])
    assert len(c.theory.states) == 4
    first = c.theory.generators[0].vector
    assert first == d1.generators[0].vector
    for g in c.theory.vectors:
        assert total(g.dm.restrict(c.theory.part(PART1))) == 0
        assert total(g.dm.restrict(c.theory.part(PART2))) == 0


def test_conjoin_rejects_bad_inputs():
    with pytest.raises(TheoryError):
        conjoin(builtin("halfspace"), builtin("halfspace"), [])
    with pytest.raises(TheoryError):
        conjoin(target_pair(), halfspace_thermometer("a"), [("a1", "x")])


def test_contradicting_contact_breaks_compliance():
    # x is in contact with both thermometer states, which are strictly ordered
    c = conjoin(target_pair(), halfspace_thermometer("a"), [("x", "a1"), ("x", "a2")])
    v = check_kp(c.theory)
    assert isinstance(v, Violating) and v.verify(c.theory)


def test_thermometer_verdicts():
    assert is_thermometer(thermo("a")).ok
    partial = conjoin(target_pair(), halfspace_thermometer("a"), [("x", "a1")])
    v = is_thermometer(partial)
    assert not v.ok and v.uncovered == ("y",)
    assert is_thermometer(conjoin(Theory(StateSpace(("z",))), halfspace_thermometer("a"),
                                  [("z", "a1")])).ok


def test_imparted_order_is_total():
    r = imparted_order(thermo("a"))
    assert r.is_total()
    assert r.strict_edges == {(("y",), ("x",))}
    merged = imparted_order(thermo("a", (("x", 1), ("y", 1))))
    assert merged.partition.classes == (("x", "y"),)
    with pytest.raises(PreconditionError):
        imparted_order(conjoin(target_pair(), halfspace_thermometer("a"), [("x", "a1")]))


def test_imparted_scale():
    s = imparted_scale(thermo("a"))
    assert s.unique and s.beta == {"x": 1, "y": Fraction(1, 2)}
    assert s.temperatures()["y"] / s.temperatures()["x"] == 2
    assert imparted_scale(thermo("a"), {"a1": 2, "a2": 1}).beta == {"x": 2, "y": 1}
    d1 = relabel(builtin("example_d1"), {"1": "d1", "2": "d2"})
    s = imparted_scale(conjoin(target_pair(), d1, [("x", "d1"), ("y", "d2")]))
    assert s.beta is None and "not ideal" in s.reason
    single = conjoin(Theory(StateSpace(("x",))), halfspace_thermometer("a"), [("x", "a1")])
    assert imparted_scale(single).beta == {"x": 1}


def test_calibration_must_be_a_scale():
    with pytest.raises(PreconditionError):
        imparted_scale(thermo("a"), {"a1": 1, "a2": 1})


def test_consistency_identical_copies():
    r = consistency_check(thermo("a"), thermo("b"))
    assert r.consistent and r.orders_agree and r.ratio == 1


def test_consistency_with_calibrations():
    r = consistency_check(thermo("a"), thermo("b"), calibrations=({"a1": 2, "a2": 1}, {"b1": 4, "b2": 2}))
    assert r.consistent and r.ratio == 2


def test_consistency_contradiction():
    c1, c2 = thermo("a"), thermo("b", (("x", 2), ("y", 1)))
    r = consistency_check(c1, c2)
    assert not r.compatible and not r.consistent
    assert r.violating.verify(joint_theory(c1, c2))


def test_comparability_conditions():
    cond = comparability_conditions(thermo("a"))
    assert cond.comparable and cond.bracketed


def test_ideal_thermometer_makes_conjunction_unique():
    assert temp_unique(thermo("a").theory).unique


def test_adding_contacts_keeps_same_hotness():
    small = conjoin(target_pair(), halfspace_thermometer("a"), [("x", "a1")])
    big = thermo("a")
    assert same_hotness(small.theory, "x", "a1") and same_hotness(big.theory, "x", "a1")


def test_one_way_contacts():
    c = conjoin(target_pair(), halfspace_thermometer("a"), [("x", "a1")], one_way=True)
    assert not is_thermometer(c).ok
