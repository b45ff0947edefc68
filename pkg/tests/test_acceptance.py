"""Acceptance criteria 1 to 10.

Each test records one ``PASS criterion N: ...`` or ``FAIL criterion N: ...``
line (shown in the pytest summary) before asserting.  Running this file as a
script prints the same lines without pytest.
"""
from fractions import Fraction

from conftest import record

from kelvinplanck.cdsynth import Compliant, check_kp
from kelvinplanck.conjunction import (conjoin, consistency_check, imparted_order, imparted_scale, is_thermometer,
                                      joint_theory)
from kelvinplanck.core import CDPair
from kelvinplanck.fixtures import builtin, halfspace_thermometer, target_pair
from kelvinplanck.scales import (classify_example_d1, classify_example_d2, classify_scale, density_witness,
                                 example_d1_density_witness, example_d1_oracle, example_d1_threshold)
from kelvinplanck.scenarios import (FloatProcess, appendix_a_sequence, appendix_c_sequence, conduction_limit,
                                    constant_fields, convergence_ratios, default_conduction_grid, default_reactor,
                                    default_reactor_grid, linear_fields, rationalize, reactor_element, tv_distance)
from kelvinplanck.selftest import fixture_theories, kp_corpus, run_lp_check, run_theory_check
from kelvinplanck.uniqueness import cd_pair_unique, find_carnot, halfspace_equals, q_set_coincides, temp_unique

SEED = 2024
CORPUS_SIZE = 200
BETAS = [(1, 1), (2, 1), (1, 2), (3, 2), (2, 3), (5, 1), (1, 5), (Fraction(1, 3), Fraction(1, 4)),
         (Fraction(1, 4), Fraction(1, 3)), (7, 6), (6, 7)]

_corpus = None


def corpus():
    global _corpus
    if _corpus is None:
        _corpus = kp_corpus(SEED, CORPUS_SIZE)
    return _corpus


def beta(b1, b2):
    return {"1": b1, "2": b2}


def verdict(v):
    return v.clausius, v.strong_clausius, v.clausius_duhem


def report(n, checks):
    """``checks`` maps a short description to a bool; records and asserts."""
    bad = [k for k, ok in checks.items() if not ok]
    if bad:
        line = f"FAIL criterion {n}: " + "; ".join(bad)
    else:
        line = f"PASS criterion {n}: " + "; ".join(checks)
    record(line)
    assert not bad, line


def test_criterion_1_example_d1():
    t = builtin("example_d1")
    warm_first = [b for b in BETAS if b[0] < b[1]]
    report(1, {
        "sampled fixture is compliant": isinstance(check_kp(t), Compliant),
        "beta=(1,1) gives (T,T,F)": verdict(classify_example_d1(beta(1, 1))) == (True, True, False),
        "beta1<beta2 all fail, sampled": all(verdict(classify_scale(t, beta(*b))) == (False,) * 3
                                             for b in warm_first),
        "beta1<beta2 all fail, closed form": all(verdict(classify_example_d1(beta(*b))) == (False,) * 3
                                                 for b in warm_first),
        "threshold at (2,1) is 9/4": example_d1_threshold(2, 1) == Fraction(9, 4),
        "oracle accepts 9/4": example_d1_oracle(0, Fraction(9, 4), 2, 1),
        "oracle rejects below 9/4": not example_d1_oracle(0, Fraction(9, 4) - Fraction(1, 10**9), 2, 1),
    })


def test_criterion_2_example_d2():
    d1, d2 = builtin("example_d1"), builtin("example_d2")
    report(2, {
        "sampled Clausius holds for every beta": all(classify_scale(d2, beta(*b)).clausius for b in BETAS),
        "closed-form Clausius holds for every beta": all(classify_example_d2(beta(*b)).clausius for b in BETAS),
        "strong Clausius set equals d1, sampled": all(
            classify_scale(d1, beta(*b)).strong_clausius == classify_scale(d2, beta(*b)).strong_clausius
            for b in BETAS),
        "strong Clausius set equals d1, closed form": all(
            classify_example_d1(beta(*b)).strong_clausius == classify_example_d2(beta(*b)).strong_clausius
            for b in BETAS),
    })


def test_criterion_3_halfspace():
    t = builtin("halfspace")
    pair = check_kp(t).pair
    c = find_carnot(t, "2", "1")
    report(3, {
        "temperature unique": temp_unique(t).unique,
        "Carnot ratio is 2": c is not None and c.ratio == 2,
        "CD pair unique": cd_pair_unique(t, pair),
        "cone fills the half-space": halfspace_equals(t, pair),
        "Q-set coincides": q_set_coincides(t),
    })


def test_criterion_4_same_hotness():
    r = run_theory_check("same_hotness", corpus())
    report(4, {f"{r.cases} theories, {len(r.failures)} disagreements": r.ok and r.cases >= 200})


def test_criterion_5_uniqueness_equivalences():
    theories = corpus() + fixture_theories()
    temp = run_theory_check("temp_uniqueness", theories)
    pair = run_theory_check("pair_uniqueness", theories)
    report(5, {
        f"temperature: {temp.cases} theories, {len(temp.failures)} disagreements": temp.ok,
        f"entropy pair: {pair.cases} theories, {len(pair.failures)} disagreements": pair.ok,
    })


def test_criterion_6_lp_engine():
    r = run_lp_check(SEED, 200)
    report(6, {f"{r.cases} programs, {len(r.failures)} mismatches or bad certificates": r.ok and r.cases == 200})


def test_criterion_7_density():
    t = builtin("example_d1")
    checks = {}
    for eps in (Fraction(1, 10), Fraction(1, 100)):
        w = density_witness(t, beta(1, 1), eps)
        checks[f"eps={eps} witness with slack {w.slack if w else None}"] = (
            w is not None and w.slack > 0 and all(abs(w.pair.beta[s] - 1) <= eps for s in "12"))
    checks["eps=0 has no closed-form witness"] = example_d1_density_witness(beta(1, 1), 0) is None
    w0 = density_witness(t, beta(1, 1), 0)
    checks["eps=0 sampled pair rejected by the oracle"] = w0 is None or not example_d1_oracle(
        w0.pair.eta["1"], w0.pair.eta["2"], w0.pair.beta["1"], w0.pair.beta["2"])
    report(7, checks)


def test_criterion_8_reactor_convergence():
    model, grid = default_reactor(), default_reactor_grid()
    seq, forward = appendix_c_sequence(model, grid=grid)
    ref = reactor_element(model, (0.5, 0.5), 1.0, 2.0, 1e-4, grid)
    ratios = convergence_ratios([tv_distance(p, ref) for _, p in seq])
    _, backward = appendix_c_sequence(model, theta0=2.0, theta1=1.0, grid=grid)
    negated = FloatProcess({s: -v for s, v in forward.dm.items()}, {s: -v for s, v in forward.q.items()})
    gap = tv_distance(backward, negated)
    report(8, {
        "ratios " + ", ".join(f"{r:.3f}" for r in ratios) + " in [0.3, 0.7]": all(0.3 <= r <= 0.7 for r in ratios),
        f"swapped limit within {gap:.1e} of the negation": gap < 1e-9,
        "rationalized swapped limit is the exact negation": rationalize(backward).vector == -rationalize(forward).vector,
    })


def test_criterion_9_conduction_convergence():
    grid = default_conduction_grid()
    f = linear_fields()
    limit = conduction_limit(f, grid)
    d = [tv_distance(p, limit) for _, p in appendix_a_sequence(8, f, grid, ns=[2, 4, 8])]
    c = constant_fields()
    climit = conduction_limit(c, grid)
    dc = max(tv_distance(p, climit) for _, p in appendix_a_sequence(8, c, grid, ns=[2, 4, 8]))
    report(9, {
        "distances " + ", ".join(f"{x:.2e}" for x in d) + " strictly decreasing": all(
            a > b for a, b in zip(d, d[1:])),
        f"final distance {d[-1]:.2e} below 1e-2": d[-1] < 1e-2,
        f"constant fields within {dc:.1e}": dc < 1e-12,
    })


def thermo(prefix, contacts=(("x", 1), ("y", 2))):
    return conjoin(target_pair(), halfspace_thermometer(prefix), [(s, f"{prefix}{k}") for s, k in contacts])


def test_criterion_10_conjunctions():
    a, b = thermo("a"), thermo("b")
    crossed = thermo("b", (("x", 2), ("y", 1)))
    totals = all(is_thermometer(c).ok and imparted_order(c).is_total() for c in (a, b))
    unique = all(imparted_scale(c).unique for c in (a, b))
    r = consistency_check(a, b, calibrations=({"a1": 2, "a2": 1}, {"b1": 4, "b2": 2}))
    bad = consistency_check(a, crossed)
    report(10, {
        "imparted order total": totals,
        "imparted scale unique": unique,
        "orders agree": r.compatible and bool(r.orders_agree),
        f"scale ratio {r.ratio} is exactly 2": r.ratio == 2 and bool(r.proportional),
        "crossed contacts not Kelvin-Planck compatible": not bad.compatible,
        "violating certificate verifies": bad.violating is not None and bad.violating.verify(joint_theory(a, crossed)),
    })


if __name__ == "__main__":
    tests = [fn for name, fn in globals().items() if name.startswith("test_criterion_")]
    for fn in sorted(tests, key=lambda f: int(f.__name__.split("_")[2])):
        try:
            fn()
        except AssertionError:
            pass
