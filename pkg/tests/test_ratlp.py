import logging
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from kelvinplanck.fourier_motzkin import fm_solve
from kelvinplanck.ratlp import (EQ, GE, LE, Feasible, Infeasible, LinearProgram, MalformedProgram, Optimal,
                                Unbounded, check_certificate, solve)
from kelvinplanck.selftest import check_lp, random_lp


def small_lp():
    lp = LinearProgram()
    x, y = lp.var("x", lower=0), lp.var("y", lower=0)
    lp.add({x: 1, y: 2}, LE, 4)
    lp.add({x: 3, y: 1}, LE, 6)
    lp.maximize({x: 1, y: 1})
    return lp


def test_textbook_optimum_and_dual():
    lp = small_lp()
    out = solve(lp)
    assert isinstance(out, Optimal)
    assert out.value == Fraction(14, 5)
    assert out.assignment == {"x": Fraction(8, 5), "y": Fraction(6, 5)}
    assert check_certificate(lp, out)
    assert fm_solve(lp).value == Fraction(14, 5)


def test_infeasible_has_farkas_rows():
    lp = LinearProgram()
    x = lp.var("x", lower=0)
    lp.add({x: 1}, LE, -1)
    out = solve(lp)
    assert isinstance(out, Infeasible)
    assert check_certificate(lp, out)
    assert fm_solve(lp).status == "infeasible"


def test_unbounded_has_point_and_ray():
    lp = LinearProgram()
    x, y = lp.var("x", lower=0), lp.var("y")
    lp.add({x: 1, y: -1}, GE, 1)
    lp.maximize({x: 1})
    out = solve(lp)
    assert isinstance(out, Unbounded)
    assert out.ray["x"] > 0
    assert check_certificate(lp, out)


def test_feasibility_without_objective():
    lp = LinearProgram()
    x = lp.var("x", lower=-2, upper=-1)
    lp.add({x: 1}, EQ, Fraction(-3, 2))
    out = solve(lp)
    assert isinstance(out, Feasible) and out.assignment["x"] == Fraction(-3, 2)
    assert check_certificate(lp, out)


def test_upper_only_and_free_variables():
    lp = LinearProgram()
    x, y = lp.var("x", upper=3), lp.var("y")
    lp.add({x: 1, y: 1}, EQ, 1)
    lp.add({y: 1}, GE, -5)
    lp.minimize({y: 1})
    out = solve(lp)
    assert out.value == -2
    assert check_certificate(lp, out)


def test_degenerate_program_terminates():
    lp = LinearProgram()
    v = [lp.var(f"x{i}", lower=0) for i in range(4)]
    lp.add({v[0]: Fraction(1, 4), v[1]: -8, v[2]: -1, v[3]: 9}, LE, 0)
    lp.add({v[0]: Fraction(1, 2), v[1]: -12, v[2]: Fraction(-1, 2), v[3]: 3}, LE, 0)
    lp.add({v[2]: 1}, LE, 1)
    lp.maximize({v[0]: Fraction(3, 4), v[1]: -20, v[2]: Fraction(1, 2), v[3]: -6})
    out = solve(lp)
    assert out.value == Fraction(5, 4)
    assert check_certificate(lp, out)


def test_tampered_certificates_fail():
    lp = small_lp()
    out = solve(lp)
    bad = Optimal({**out.assignment, "x": out.assignment["x"] + 1}, out.value, out.dual, out.pivots)
    assert not check_certificate(lp, bad)
    bad = Optimal(out.assignment, out.value, [2 * y for y in out.dual], out.pivots)
    assert not check_certificate(lp, bad)


def test_malformed_programs():
    lp = LinearProgram()
    lp.var("x")
    with pytest.raises(MalformedProgram):
        lp.var("x")
    with pytest.raises(MalformedProgram):
        lp.add({"z": 1}, LE, 0)
    with pytest.raises(MalformedProgram):
        lp.add({"x": 1}, "<", 0)


def test_debug_tableau_goes_to_logging(caplog):
    with caplog.at_level(logging.DEBUG, logger="kelvinplanck"):
        solve(small_lp())
    assert caplog.records


def test_random_programs_agree_with_elimination():
    rng = random.Random(7)
    kinds = set()
    for _ in range(150):
        lp = random_lp(rng)
        assert check_lp(lp) == []
        kinds.add(solve(lp).kind)
    assert kinds == {"optimal", "infeasible", "unbounded", "feasible"}


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_property_simplex_matches_oracle(seed):
    assert check_lp(random_lp(random.Random(seed))) == []


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_property_copy_is_independent(seed):
    lp = random_lp(random.Random(seed))
    c = lp.copy()
    c.var("extra", lower=0)
    assert "extra" not in lp.variables
    assert solve(c).kind in {"optimal", "infeasible", "unbounded", "feasible"}
