import io
import json
from pathlib import Path

import pytest

from kelvinplanck.cli import run
from kelvinplanck.serialize import dumps, load_theory, theory_to_json

DATA = Path(__file__).resolve().parent.parent / "data"


def call(*argv):
    out = io.StringIO()
    code = run(["--json", *map(str, argv)], out)
    return code, json.loads(out.getvalue())


def test_check_kp_compliant():
    code, r = call("check-kp", DATA / "example_d1.json")
    assert code == 0 and r["verdict"] == "compliant"
    beta = r["certificate"]["beta"]
    from fractions import Fraction
    assert Fraction(beta["1"]["exact"]) >= Fraction(beta["2"]["exact"])
    assert r["certificate"]["verified"]


def test_check_kp_violating():
    code, r = call("check-kp", DATA / "violating.json")
    assert code == 1
    assert r["certificate"]["kind"] == "violating" and r["certificate"]["verified"]


def test_compare_on_halfspace():
    code, r = call("compare", "halfspace", "--a", "2", "--b", "1")
    assert code == 0 and r["verdict"] == "hotter"
    code, r = call("compare", "halfspace", "--a", "1", "--b", "2")
    assert code == 1 and r["certificate"]["verified"]


@pytest.mark.parametrize("flag,verdict", [("--weak", "weakly hotter"), ("--strong", "strongly hotter")])
def test_compare_weak_and_strong(flag, verdict):
    code, r = call("compare", "halfspace", "--a", "2", "--b", "1", flag)
    assert code == 0 and r["verdict"] == verdict and r["certificate"]["verified"]


@pytest.mark.parametrize("argv,code", [
    (["validate", "halfspace"], 0),
    (["cd-pair", "halfspace"], 0),
    (["hotness", "halfspace"], 0),
    (["hotness", "example_d1", "--partition"], 0),
    (["carnot", "halfspace", "--from", "2", "--to", "1"], 0),
    (["carnot", "example_d1", "--from", "2", "--to", "1"], 1),
    (["unique", "temp", "halfspace"], 0),
    (["unique", "temp", "example_d1"], 1),
    (["unique", "temp", "example_d1", "--subdomain", "2"], 0),
    (["unique", "entropy", "halfspace", "--pair", DATA / "halfspace_pair.json"], 0),
    (["halfspace", "halfspace", "--pair", DATA / "halfspace_pair.json"], 0),
    (["qset", "halfspace"], 0),
    (["qset", "example_d1"], 1),
    (["complete", "example_d1", "--dm", DATA / "dm.json", "--q", DATA / "q_minus_1.json"], 0),
    (["thermometer", DATA / "conj_a.json"], 0),
    (["imparted", DATA / "conj_a.json", "--order"], 0),
    (["scales", "classify", "example_d1", "--beta", "1=1,2=1", "--analytic"], 1),
    (["scales", "classify", "halfspace", "--beta", "1=2,2=1"], 0),
    (["scales", "density", "example_d1", "--beta", "1=1,2=1", "--eps", "1/10"], 0),
    (["scales", "density", "example_d1", "--beta", "1=1,2=1", "--eps", "0", "--analytic"], 1),
    (["scenario", "builtin", "halfspace"], 0),
])
def test_exit_codes(argv, code):
    got, r = call(*argv)
    assert got == code, r
    assert not _unverified(r)


def _unverified(obj):
    if isinstance(obj, dict):
        return obj.get("verified") is False or any(_unverified(v) for v in obj.values())
    if isinstance(obj, list):
        return any(_unverified(v) for v in obj)
    return False


def test_every_number_has_exact_and_decimal_forms():
    _, r = call("carnot", "halfspace", "--from", "2", "--to", "1")
    assert r["certificate"]["ratio"] == {"exact": "2", "approx": "2"}


def test_imparted_scale_uses_calibration():
    code, r = call("imparted", DATA / "conj_a.json", "--scale")
    assert code == 0
    assert r["beta"] == {"x": {"exact": "2", "approx": "2"}, "y": {"exact": "1", "approx": "1"}}


def test_consistency():
    code, r = call("consistency", DATA / "conj_a.json", DATA / "conj_b.json")
    assert code == 0 and r["ratio"]["exact"] == "2"
    code, r = call("consistency", DATA / "conj_a.json", DATA / "conj_b_crossed.json")
    assert code == 1 and r["verdict"] == "not Kelvin-Planck compatible" and r["certificate"]["verified"]


def test_conjoin_writes_a_reparsable_theory(tmp_path):
    out = tmp_path / "c.json"
    code, _ = call("conjoin", DATA / "conj_a.json", "--out", out)
    assert code == 0
    assert dumps(theory_to_json(load_theory(out))) == out.read_text()


def test_scenario_files(tmp_path):
    code, r = call("scenario", "appendix-c", "--out", tmp_path)
    assert code == 0
    rows = (tmp_path / "convergence.csv").read_text().splitlines()
    assert rows[0] == "eps,tv_distance" and len(rows) == 4
    t = load_theory(tmp_path / "theory.json")
    assert dumps(theory_to_json(t)) == (tmp_path / "theory.json").read_text()
    assert r["max_renormalization"] < 1e-9


def test_scenario_builtin_round_trip(tmp_path):
    out = tmp_path / "d1.json"
    call("scenario", "builtin", "example_d1", "--out", out)
    assert out.read_text() == (DATA / "example_d1.json").read_text()


def test_input_errors_exit_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"states": ["a"], "generators": [{"dm": {"a": 1.5}}]}')
    code, r = call("check-kp", bad)
    assert code == 2 and "generators[0].dm.a" in r["error"]
    code, r = call("check-kp", "missing-file")
    assert code == 2
    code, r = call("compare", "halfspace", "--a", "1", "--b", "zz")
    assert code == 2
    code, r = call("hotness", DATA / "violating.json")
    assert code == 2 and "check-kp" in r["error"]


def test_unknown_command_exit_2(capsys):
    assert run(["frobnicate"], io.StringIO()) == 2


def test_human_output_without_color(monkeypatch):
    monkeypatch.setenv("NO_COLOR", "1")
    out = io.StringIO()
    assert run(["check-kp", "halfspace"], out) == 0
    text = out.getvalue()
    assert text.startswith("check-kp halfspace: compliant") and "\033" not in text
    assert "2/3 (~0.666667)" in text


def test_json_flag_after_subcommand():
    out = io.StringIO()
    run(["qset", "halfspace", "--json"], out)
    assert json.loads(out.getvalue())["exit_code"] == 0


def test_selftest_small():
    code, r = call("selftest", "--seed", "3", "--size", "10")
    assert code == 0
    assert set(r["suites"]) == {"lp_vs_elimination", "same_hotness", "temp_uniqueness", "pair_uniqueness"}
