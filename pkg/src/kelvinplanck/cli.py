"""Command-line front end.

Exit codes: 0 for an affirmative answer, 1 for a negative answer (with a
certificate where one exists), 2 for bad input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping, Sequence

from . import scenarios
from .cdsynth import Compliant, NotKelvinPlanck, Violating, cd_feasible, check_kp
from .cone import MembershipWitness, query
from .conjunction import (PreconditionError, comparability_conditions, consistency_check, imparted_order,
                          imparted_scale, is_thermometer, joint_theory)
from .core import CDPair, ProcessVector, Theory, TheoryError, format_rational, validate_theory
from .fixtures import BUILTINS, builtin
from .hotness import (OrderReport, hotter_certificate, order_report, partition, same_hotness,
                      strongly_hotter, transfer, weakly_hotter)
from .scales import ANALYTIC, classify_scale, density_witness, example_d1_density_witness
from .serialize import (FileFormatError, dumps, load_conjunction_spec, load_measure, load_pair, load_theory,
                        theory_to_json)
from .uniqueness import (cd_pair_unique, complete_to_cone, entropy_unique, find_carnot, halfspace_equals,
                         q_set_coincides, temp_unique)

log = logging.getLogger("kelvinplanck")


class InputError(Exception):
    pass


# Rendering.

def num(x: Fraction) -> dict[str, str]:
    return {"exact": format_rational(x), "approx": f"{float(x):.6g}"}


def measure(m: Mapping[str, Fraction]) -> dict[str, dict]:
    return {s: num(v) for s, v in sorted(m.items())}


def pair_json(p: CDPair) -> dict:
    return {"eta": measure(p.eta), "beta": measure(p.beta)}


def vector_json(v: ProcessVector) -> dict:
    return {"dm": measure(v.dm), "q": measure(v.q)}


def witness_json(w: MembershipWitness) -> dict:
    return {f"g{k}": num(c) for k, c in sorted(w.coefficients.items()) if c}


def violating_json(v: Violating, t: Theory) -> dict:
    return {"kind": "violating", "heating": measure(v.heating), "generators": witness_json(v.witness),
            "verified": v.verify(t)}


def level(names: Sequence[str]) -> str:
    return "{" + ", ".join(names) + "}"


def order_json(r: OrderReport) -> dict:
    def edges(es):
        return sorted(f"{level(a)} > {level(b)}" for a, b in es)
    return {"levels": [list(c) for c in r.partition.classes], "hotter": edges(r.strict_edges),
            "weakly_hotter": edges(r.weak_edges), "strongly_hotter": edges(r.strong_edges),
            "total": r.is_total()}


def _color(word: str, ok: bool, stream) -> str:
    if os.environ.get("NO_COLOR") is not None or not getattr(stream, "isatty", lambda: False)():
        return word
    return f"\033[{32 if ok else 31}m{word}\033[0m"


def _is_num(v) -> bool:
    return isinstance(v, dict) and set(v) == {"exact", "approx"}


def _flat(v) -> str | None:
    if _is_num(v):
        return f"{v['exact']} (~{v['approx']})"
    if isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v):
        return ", ".join(map(str, v)) if v else "none"
    if isinstance(v, dict) and not v:
        return "none"
    if not isinstance(v, (dict, list)):
        return str(v)
    return None


def _render(value, indent: int) -> list[str]:
    pad = "  " * indent
    out = []
    if isinstance(value, dict):
        for k, v in value.items():
            flat = _flat(v)
            if flat is not None:
                out.append(f"{pad}{k}: {flat}")
            else:
                out.append(f"{pad}{k}:")
                out += _render(v, indent + 1)
    else:
        for v in value:
            flat = _flat(v)
            if flat is not None:
                out.append(f"{pad}- {flat}")
            else:
                out.append(f"{pad}-")
                out += _render(v, indent + 1)
    return out


def emit(report: dict, as_json: bool, stream=None) -> None:
    stream = stream or sys.stdout
    if as_json:
        stream.write(dumps(report))
        return
    ok = report.get("exit_code", 0) == 0
    lines = [f"{report['command']}: {_color(str(report['verdict']), ok, stream)}"]
    body = {k: v for k, v in report.items() if k not in ("command", "verdict", "exit_code")}
    lines += _render(body, 1)
    stream.write("\n".join(lines) + "\n")


# Input helpers.

def theory_arg(ref: str) -> Theory:
    """A theory file, or the name of a built-in fixture."""
    path = Path(ref)
    if path.exists():
        return load_theory(path)
    if ref in BUILTINS:
        return builtin(ref)
    raise InputError(f"{ref}: no such file or built-in theory (built-ins: {', '.join(sorted(BUILTINS))})")


def beta_arg(text: str) -> dict[str, Fraction]:
    """``state=p/q`` pairs separated by commas, or a JSON file mapping states to rationals."""
    if Path(text).exists():
        return dict(load_measure(text))
    out = {}
    for item in text.split(","):
        if "=" not in item:
            raise InputError(f"--beta: expected state=value, got {item!r}")
        s, v = item.split("=", 1)
        try:
            out[s.strip()] = Fraction(v.strip())
        except (ValueError, ZeroDivisionError):
            raise InputError(f"--beta: not a rational: {v!r}") from None
    return out


def _states(t: Theory, labels: Sequence[str] | None) -> list[str] | None:
    if labels is None:
        return None
    t.states.check(labels)
    return list(labels)


# Commands.  Each returns a report dict with "verdict" and "exit_code".

def cmd_validate(a) -> dict:
    t = theory_arg(a.theory)
    problems = validate_theory(t)
    return {"verdict": "valid" if not problems else "invalid", "exit_code": 0 if not problems else 1,
            "states": len(t.states), "generators": len(t.generators), "problems": [str(p) for p in problems]}


def cmd_check_kp(a) -> dict:
    t = theory_arg(a.theory)
    v = check_kp(t)
    if isinstance(v, Compliant):
        assert cd_feasible(t, v.pair)
        return {"verdict": "compliant", "exit_code": 0,
                "certificate": {"kind": "pair", **pair_json(v.pair), "slack": num(v.slack), "verified": True}}
    return {"verdict": "not Kelvin-Planck compatible", "exit_code": 1, "certificate": violating_json(v, t)}


def cmd_cd_pair(a) -> dict:
    report = cmd_check_kp(a)
    if report["exit_code"] == 0:
        report["verdict"] = "pair found"
    return report


def cmd_hotness(a) -> dict:
    t = theory_arg(a.theory)
    if a.partition:
        return {"verdict": "partition", "exit_code": 0, "levels": [list(c) for c in partition(t).classes]}
    r = order_report(t)
    return {"verdict": "total order" if r.is_total() else "partial order", "exit_code": 0, **order_json(r)}


def cmd_compare(a) -> dict:
    t = theory_arg(a.theory)
    t.states.check((a.a, a.b))
    if a.weak or a.strong:
        find = strongly_hotter if a.strong else weakly_hotter
        w = find(t, [a.a], [a.b])
        word = "strongly hotter" if a.strong else "weakly hotter"
        if w is None:
            return {"verdict": f"not {word}", "exit_code": 1}
        ok = w.witness.verify(t, ProcessVector({}, w.mu_hot - w.mu_cold + w.nu))
        return {"verdict": word, "exit_code": 0,
                "certificate": {"mu_hot": measure(w.mu_hot), "mu_cold": measure(w.mu_cold), "nu": measure(w.nu),
                                "generators": witness_json(w.witness), "verified": ok}}
    if a.a == a.b or same_hotness(t, a.a, a.b):
        return {"verdict": "same hotness", "exit_code": 1}
    cert = hotter_certificate(t, [a.a], [a.b])
    if cert is not None:
        aug = t.extend([transfer(a.b, a.a)])
        return {"verdict": "hotter", "exit_code": 0,
                "certificate": {**violating_json(cert, aug), "added_transfer": f"{a.b} -> {a.a}"}}
    counter = check_kp(t.extend([transfer(a.b, a.a)]))
    return {"verdict": "not hotter", "exit_code": 1,
            "certificate": {"kind": "pair", **pair_json(counter.pair),
                            "note": f"T({a.a}) <= T({a.b}) on this scale",
                            "verified": cd_feasible(t, counter.pair)}}


def cmd_carnot(a) -> dict:
    t = theory_arg(a.theory)
    c = find_carnot(t, a.hot, a.cold)
    if c is None:
        return {"verdict": "no Carnot element", "exit_code": 1}
    return {"verdict": "Carnot element", "exit_code": 0,
            "certificate": {"c_hot": num(c.c_hot), "c_cold": num(c.c_cold), "ratio": num(c.ratio),
                            "forward": witness_json(c.forward), "backward": witness_json(c.backward),
                            "verified": c.verify(t)}}


def cmd_unique_temp(a) -> dict:
    t = theory_arg(a.theory)
    v = temp_unique(t, _states(t, a.subdomain), pairwise=a.pairwise)
    if v.unique:
        return {"verdict": "unique", "exit_code": 0,
                "evidence": [{"hot": c.hot, "cold": c.cold, "ratio": num(c.ratio), "verified": c.verify(t)}
                             for c in v.evidence]}
    p1, p2 = v.pairs
    return {"verdict": "not unique", "exit_code": 1, "failed": list(v.failed),
            "certificate": {"pair1": pair_json(p1), "pair2": pair_json(p2),
                            "verified": cd_feasible(t, p1) and cd_feasible(t, p2)}}


def cmd_unique_entropy(a) -> dict:
    t = theory_arg(a.theory)
    pair = load_pair(a.pair)
    sub = _states(t, a.subdomain)
    v = entropy_unique(t, pair, sub)
    if v.unique:
        return {"verdict": "unique", "exit_code": 0,
                "connections": [{"hot": c.hot, "cold": c.cold, "q": measure(c.q), "verified": c.verify(t, sub)}
                                for c in v.connections]}
    report = {"verdict": "not unique", "exit_code": 1}
    if v.counterexample is not None:
        report["certificate"] = {"pair": pair_json(v.counterexample),
                                 "verified": cd_feasible(t, v.counterexample)}
    return report


def cmd_halfspace(a) -> dict:
    t = theory_arg(a.theory)
    pair = load_pair(a.pair)
    eq, uniq = halfspace_equals(t, pair), cd_pair_unique(t, pair)
    return {"verdict": "cone is the half-space" if eq else "cone is smaller than the half-space",
            "exit_code": 0 if eq else 1, "pair_unique": uniq}


def cmd_qset(a) -> dict:
    t = theory_arg(a.theory)
    ok = q_set_coincides(t)
    return {"verdict": "every state can emit heat freely" if ok else "some state cannot emit heat freely",
            "exit_code": 0 if ok else 1}


def cmd_complete(a) -> dict:
    t = theory_arg(a.theory)
    dm, q = load_measure(a.dm), load_measure(a.q)
    t.states.check(dm.support() | q.support())
    nu = complete_to_cone(t, dm, q)
    if nu is None:
        return {"verdict": "no completion", "exit_code": 1}
    found = query(t, ProcessVector(dm, q + nu))
    ok = isinstance(found, MembershipWitness) and found.verify(t, ProcessVector(dm, q + nu))
    return {"verdict": "completion found", "exit_code": 0,
            "certificate": {"nu": measure(nu), "generators": witness_json(found), "verified": ok}}


def cmd_conjoin(a) -> dict:
    c, _ = load_conjunction_spec(a.spec)
    text = dumps(theory_to_json(c.theory))
    if a.out:
        Path(a.out).write_text(text, encoding="utf-8")
    report = {"verdict": "conjoined", "exit_code": 0, "states": len(c.theory.states),
              "generators": len(c.theory.generators), "contacts": [f"{x}-{y}" for x, y in c.contacts]}
    if a.out:
        report["written"] = a.out
    else:
        report["theory"] = json.loads(text)
    return report


def cmd_thermometer(a) -> dict:
    c, _ = load_conjunction_spec(a.spec)
    v = is_thermometer(c)
    cond = comparability_conditions(c)
    return {"verdict": "thermometer" if v.ok else "not a thermometer", "exit_code": 0 if v.ok else 1,
            "pairing": dict(v.pairing), "uncovered": list(v.uncovered),
            "comparable": cond.comparable, "bracketed": cond.bracketed}


def cmd_imparted(a) -> dict:
    c, cal = load_conjunction_spec(a.spec)
    report: dict = {"verdict": "imparted", "exit_code": 0}
    if not a.scale:
        r = imparted_order(c)
        report["order"] = order_json(r)
    if not a.order:
        s = imparted_scale(c, cal)
        if s.beta is None:
            report.update(verdict=f"no imparted scale: {s.reason}", exit_code=1)
        else:
            report["beta"] = measure(s.beta)
            report["temperature"] = measure(s.temperatures())
    return report


def cmd_consistency(a) -> dict:
    c1, cal1 = load_conjunction_spec(a.spec1)
    c2, cal2 = load_conjunction_spec(a.spec2)
    r = consistency_check(c1, c2, calibrations=(cal1, cal2))
    if not r.compatible:
        return {"verdict": "not Kelvin-Planck compatible", "exit_code": 1,
                "certificate": violating_json(r.violating, joint_theory(c1, c2))}
    report = {"verdict": "consistent" if r.consistent else "inconsistent", "exit_code": 0 if r.consistent else 1,
              "orders_agree": r.orders_agree, "scales_compared": r.scales_compared}
    if r.order_discrepancy:
        report["order_discrepancy"] = list(r.order_discrepancy)
    if r.ratio is not None:
        report["ratio"] = num(r.ratio)
        report["proportional"] = r.proportional
    if r.scale_discrepancy:
        report["scale_discrepancy"] = list(r.scale_discrepancy)
    return report


def cmd_scales_classify(a) -> dict:
    beta = beta_arg(a.beta)
    if a.analytic:
        if a.theory not in ANALYTIC:
            raise InputError(f"--analytic is available for {', '.join(sorted(ANALYTIC))}")
        v = ANALYTIC[a.theory](beta)
    else:
        v = classify_scale(theory_arg(a.theory), beta)
    report = {"verdict": "Clausius-Duhem" if v.clausius_duhem else
              "strong Clausius" if v.strong_clausius else "Clausius" if v.clausius else "none",
              "exit_code": 0 if v.clausius_duhem else 1,
              "clausius": v.clausius, "strong_clausius": v.strong_clausius, "clausius_duhem": v.clausius_duhem}
    if v.eta is not None:
        report["eta"] = measure(v.eta)
    if v.heating_cycle is not None:
        report["heating_cycle"] = measure(v.heating_cycle)
    return report


def cmd_scales_density(a) -> dict:
    beta = beta_arg(a.beta)
    eps = Fraction(a.eps)
    if a.analytic:
        if a.theory != "example_d1":
            raise InputError("--analytic density is available for example_d1")
        p = example_d1_density_witness(beta, eps)
        if p is None:
            return {"verdict": "no pair within eps", "exit_code": 1}
        return {"verdict": "pair within eps", "exit_code": 0, "certificate": pair_json(p)}
    t = theory_arg(a.theory)
    w = density_witness(t, beta, eps)
    if w is None:
        return {"verdict": "no pair within eps", "exit_code": 1}
    return {"verdict": "pair within eps", "exit_code": 0,
            "certificate": {**pair_json(w.pair), "slack": num(w.slack), "verified": cd_feasible(t, w.pair)}}


def _csv(rows: list[tuple], header: tuple[str, str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _write_sequence(out: str | None, grid, elements, limit, key: str, rows) -> dict:
    """Theory and CSV files for a scenario run; returns report fields."""
    fields: dict = {"convergence": [{key: k, "tv_distance": d} for k, d in rows]}
    vectors = [scenarios.rationalize(p) for _, p in elements] + [scenarios.rationalize(limit)]
    fields["max_rounding_error"] = max(v.rounding_error for v in vectors)
    fields["max_renormalization"] = max(v.renormalization for v in vectors)
    if out:
        d = Path(out)
        d.mkdir(parents=True, exist_ok=True)
        theory = scenarios.to_theory(grid, [v.vector for v in vectors])
        (d / "theory.json").write_text(dumps(theory_to_json(theory)), encoding="utf-8")
        (d / "convergence.csv").write_text(_csv(rows, (key, "tv_distance")), encoding="utf-8")
        fields["written"] = [str(d / "theory.json"), str(d / "convergence.csv")]
    return fields


def cmd_scenario(a) -> dict:
    if a.which == "builtin":
        t = builtin(a.name)
        text = dumps(theory_to_json(t))
        if a.out:
            Path(a.out).write_text(text, encoding="utf-8")
            return {"verdict": "written", "exit_code": 0, "file": a.out}
        return {"verdict": a.name, "exit_code": 0, "theory": json.loads(text)}
    if a.which == "appendix-a":
        fields = scenarios.constant_fields() if a.constant else scenarios.linear_fields()
        grid = scenarios.default_conduction_grid()
        seq = scenarios.appendix_a_sequence(a.n_max, fields, grid, ns=a.n)
        limit = scenarios.conduction_limit(fields, grid)
        rows = [(n, scenarios.tv_distance(p, limit)) for n, p in seq]
        key = "n"
    else:
        model = scenarios.frozen_reactor() if a.frozen else scenarios.default_reactor()
        grid = scenarios.default_reactor_grid()
        seq, limit = scenarios.appendix_c_sequence(model, eps_list=a.eps, grid=grid)
        ref = scenarios.reactor_element(model, (0.5, 0.5), 1.0, 2.0, a.reference, grid)
        rows = [(e, scenarios.tv_distance(p, ref)) for e, p in seq]
        key = "eps"
    report = {"verdict": a.which, "exit_code": 0}
    report.update(_write_sequence(a.out, grid, seq, limit, key, rows))
    if not a.out and not a.json:
        sys.stdout.write(_csv(rows, (key, "tv_distance")))
    return report


def cmd_selftest(a) -> dict:
    from .selftest import run_all
    results = run_all(a.seed, a.size)
    failed = [r for r in results if not r.ok]
    return {"verdict": "all checks agree" if not failed else "disagreements found",
            "exit_code": 0 if not failed else 1, "seed": a.seed,
            "suites": {r.name: {"cases": r.cases, "failures": r.failures[:10]} for r in results}}


def build_parser() -> argparse.ArgumentParser:
    # global flags are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="emit the report as JSON")
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS,
                        help="debug logging to stderr")
    p = argparse.ArgumentParser(prog="kelvinplanck", description="Exact second-law decisions on finite theories.",
                                parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    def theory_cmd(name, fn, help):
        sp = sub.add_parser(name, help=help, parents=[common])
        sp.add_argument("theory", help="theory file or built-in name")
        sp.set_defaults(fn=fn)
        return sp

    theory_cmd("validate", cmd_validate, "check a theory file")
    theory_cmd("check-kp", cmd_check_kp, "Kelvin-Planck check with certificate")
    theory_cmd("cd-pair", cmd_cd_pair, "synthesize an entropy/coldness pair")
    sp = theory_cmd("hotness", cmd_hotness, "hotness levels and order")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--partition", action="store_true")
    g.add_argument("--order", action="store_true")
    sp = theory_cmd("compare", cmd_compare, "is state A hotter than state B")
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--weak", action="store_true")
    g.add_argument("--strong", action="store_true")
    sp = theory_cmd("carnot", cmd_carnot, "Carnot element between two states")
    sp.add_argument("--from", dest="hot", required=True)
    sp.add_argument("--to", dest="cold", required=True)

    up = sub.add_parser("unique", help="uniqueness of temperature or entropy", parents=[common])
    usub = up.add_subparsers(dest="kind", required=True)
    sp = usub.add_parser("temp", parents=[common])
    sp.add_argument("theory")
    sp.add_argument("--subdomain", nargs="+")
    sp.add_argument("--pairwise", action="store_true")
    sp.set_defaults(fn=cmd_unique_temp)
    sp = usub.add_parser("entropy", parents=[common])
    sp.add_argument("theory")
    sp.add_argument("--pair", required=True)
    sp.add_argument("--subdomain", nargs="+")
    sp.set_defaults(fn=cmd_unique_entropy)

    sp = theory_cmd("halfspace", cmd_halfspace, "does the cone fill the pair's half-space")
    sp.add_argument("--pair", required=True)
    theory_cmd("qset", cmd_qset, "can every state emit heat with no other effect")
    sp = theory_cmd("complete", cmd_complete, "extra heat making (dm, q) a cone element")
    sp.add_argument("--dm", required=True)
    sp.add_argument("--q", required=True)

    for name, fn, help in (("conjoin", cmd_conjoin, "build a conjunction theory"),
                           ("thermometer", cmd_thermometer, "is the conjunction a thermometer"),
                           ("imparted", cmd_imparted, "order and scale read off the thermometer")):
        sp = sub.add_parser(name, help=help, parents=[common])
        sp.add_argument("spec", help="conjunction spec file")
        sp.set_defaults(fn=fn)
        if name == "conjoin":
            sp.add_argument("--out")
        if name == "imparted":
            g = sp.add_mutually_exclusive_group()
            g.add_argument("--order", action="store_true")
            g.add_argument("--scale", action="store_true")
    sp = sub.add_parser("consistency", help="do two thermometers agree", parents=[common])
    sp.add_argument("spec1")
    sp.add_argument("spec2")
    sp.set_defaults(fn=cmd_consistency)

    sp = sub.add_parser("scales", help="Clausius-type scale checks", parents=[common])
    ssub = sp.add_subparsers(dest="kind", required=True)
    c = ssub.add_parser("classify", parents=[common])
    c.add_argument("theory")
    c.add_argument("--beta", required=True, help="state=p/q,... or a JSON file")
    c.add_argument("--analytic", action="store_true", help="closed form for the unsampled quadratic family")
    c.set_defaults(fn=cmd_scales_classify)
    d = ssub.add_parser("density", parents=[common])
    d.add_argument("theory")
    d.add_argument("--beta", required=True)
    d.add_argument("--eps", required=True)
    d.add_argument("--analytic", action="store_true")
    d.set_defaults(fn=cmd_scales_density)

    sp = sub.add_parser("scenario", help="numeric process families and fixtures", parents=[common])
    scsub = sp.add_subparsers(dest="which", required=True)
    s = scsub.add_parser("appendix-a", help="conduction across a barrier", parents=[common])
    s.add_argument("--n-max", type=int, default=8)
    s.add_argument("--n", type=int, nargs="+", default=[2, 4, 8])
    s.add_argument("--constant", action="store_true", help="constant fields")
    s.add_argument("--out")
    s.set_defaults(fn=cmd_scenario)
    s = scsub.add_parser("appendix-c", help="reactor under a fast temperature ramp", parents=[common])
    s.add_argument("--eps", type=float, nargs="+", default=[0.1, 0.05, 0.025])
    s.add_argument("--reference", type=float, default=1e-4)
    s.add_argument("--frozen", action="store_true", help="no reactions")
    s.add_argument("--out")
    s.set_defaults(fn=cmd_scenario)
    s = scsub.add_parser("builtin", help="write a fixture theory", parents=[common])
    s.add_argument("name", choices=sorted(BUILTINS))
    s.add_argument("--out")
    s.set_defaults(fn=cmd_scenario)

    sp = sub.add_parser("selftest", help="randomized cross-checks", parents=[common])
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--size", type=int, default=200)
    sp.set_defaults(fn=cmd_selftest)
    return p


def run(argv: Sequence[str] | None = None, stream=None) -> int:
    stream = stream or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args.json = getattr(args, "json", False)
    args.verbose = getattr(args, "verbose", False)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    command = " ".join(argv if argv is not None else sys.argv[1:])
    start = time.perf_counter()
    try:
        report = args.fn(args)
    except (InputError, FileFormatError, PreconditionError, NotKelvinPlanck, TheoryError) as exc:
        report = {"verdict": "error", "exit_code": 2, "error": str(exc)}
        if isinstance(exc, NotKelvinPlanck):
            report["error"] = f"{exc} (run check-kp for a certificate)"
    report = {"command": command, **report, "seconds": round(time.perf_counter() - start, 3)}
    emit(report, args.json, stream)
    return report["exit_code"]


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
