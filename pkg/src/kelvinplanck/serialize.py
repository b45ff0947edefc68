"""JSON file formats for theories, pairs, measures and conjunction specs.

Rationals are written as ``"p/q"`` or ``"n"`` strings.  Output is canonical:
sorted keys, lowest terms, fixed indentation, so equal objects serialize to
identical bytes.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping

from .core import (CDPair, Generator, ProcessVector, SignedMeasure, StateSpace, Theory,
                   TheoryError, as_rational, format_rational, validate_theory)


class FileFormatError(TheoryError):
    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def measure_to_json(m: Mapping[str, Fraction]) -> dict[str, str]:
    return {s: format_rational(v) for s, v in m.items() if v}


def _rat(value, where: str) -> Fraction:
    if isinstance(value, float):
        raise FileFormatError(where, "rationals must be written as \"p/q\" strings, not floats")
    try:
        return as_rational(value)
    except (TypeError, TheoryError) as exc:
        raise FileFormatError(where, str(exc)) from None


def measure_from_json(obj, where: str) -> SignedMeasure:
    if not isinstance(obj, dict):
        raise FileFormatError(where, "expected an object mapping states to rationals")
    return SignedMeasure({str(k): _rat(v, f"{where}.{k}") for k, v in obj.items()})


def theory_to_json(t: Theory) -> dict:
    out: dict[str, Any] = {
        "states": list(t.states.labels),
        "generators": [{"dm": measure_to_json(g.vector.dm), "q": measure_to_json(g.vector.q),
                        "true_process": g.true_process} for g in t.generators],
    }
    if t.states.metadata:
        out["metadata"] = {s: list(v) for s, v in t.states.metadata.items()}
    if t.parts:
        out["parts"] = {name: list(labels) for name, labels in t.parts}
    return out


def theory_from_json(obj, where: str = "theory") -> Theory:
    if not isinstance(obj, dict):
        raise FileFormatError(where, "expected a JSON object")
    states = obj.get("states")
    if not isinstance(states, list) or not all(isinstance(s, str) for s in states):
        raise FileFormatError(f"{where}.states", "expected a list of strings")
    meta_obj = obj.get("metadata", {}) or {}
    if not isinstance(meta_obj, dict):
        raise FileFormatError(f"{where}.metadata", "expected an object")
    meta = {}
    for s, v in meta_obj.items():
        if not isinstance(v, list) or not all(isinstance(x, (int, float)) for x in v):
            raise FileFormatError(f"{where}.metadata.{s}", "expected a list of numbers")
        meta[s] = tuple(v)
    try:
        space = StateSpace(tuple(states), meta)
    except TheoryError as exc:
        raise FileFormatError(f"{where}.states", str(exc)) from None
    gens = []
    for k, g in enumerate(obj.get("generators", [])):
        gw = f"{where}.generators[{k}]"
        if not isinstance(g, dict):
            raise FileFormatError(gw, "expected an object")
        flag = g.get("true_process", True)
        if not isinstance(flag, bool):
            raise FileFormatError(f"{gw}.true_process", "expected a boolean")
        vec = ProcessVector(measure_from_json(g.get("dm", {}), f"{gw}.dm"),
                            measure_from_json(g.get("q", {}), f"{gw}.q"))
        gens.append(Generator(vec, flag))
    parts_obj = obj.get("parts", {}) or {}
    if not isinstance(parts_obj, dict):
        raise FileFormatError(f"{where}.parts", "expected an object")
    parts = tuple((str(n), tuple(v)) for n, v in parts_obj.items())
    t = Theory(space, tuple(gens), parts)
    problems = validate_theory(t)
    if problems:
        raise FileFormatError(where, "; ".join(map(str, problems)))
    return t


def pair_to_json(p: CDPair) -> dict:
    return {"eta": {s: format_rational(v) for s, v in p.eta.items()},
            "beta": {s: format_rational(v) for s, v in p.beta.items()}}


def pair_from_json(obj, where: str = "pair") -> CDPair:
    if not isinstance(obj, dict) or "beta" not in obj:
        raise FileFormatError(where, "expected an object with \"eta\" and \"beta\"")
    beta = {str(k): _rat(v, f"{where}.beta.{k}") for k, v in obj["beta"].items()}
    eta = {str(k): _rat(v, f"{where}.eta.{k}") for k, v in obj.get("eta", {}).items()}
    for s in beta:
        eta.setdefault(s, Fraction(0))
    try:
        return CDPair(eta, beta)
    except TheoryError as exc:
        raise FileFormatError(where, str(exc)) from None


def read_json(path: str | Path) -> Any:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise FileFormatError(str(p), exc.strerror or "cannot read file") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{p}:{exc.lineno}:{exc.colno}", exc.msg) from None


def load_theory(path: str | Path) -> Theory:
    return theory_from_json(read_json(path), str(path))


def save_theory(t: Theory, path: str | Path) -> None:
    Path(path).write_text(dumps(theory_to_json(t)), encoding="utf-8")


def load_pair(path: str | Path) -> CDPair:
    return pair_from_json(read_json(path), str(path))


def load_measure(path: str | Path) -> SignedMeasure:
    return measure_from_json(read_json(path), str(path))


def load_conjunction_spec(path: str | Path):
    """Read ``{"target", "thermometer", "contacts", "one_way"?, "calibration"?}``.

    ``target`` and ``thermometer`` are inline theory objects or paths relative
    to the spec file.  Returns ``(Conjunction, calibration or None)``.
    """
    from .conjunction import conjoin

    base = Path(path).parent
    obj = read_json(path)
    if not isinstance(obj, dict):
        raise FileFormatError(str(path), "expected a JSON object")

    def part(key: str) -> Theory:
        ref = obj.get(key)
        if isinstance(ref, str):
            return load_theory(base / ref)
        if isinstance(ref, dict):
            return theory_from_json(ref, f"{path}.{key}")
        raise FileFormatError(f"{path}.{key}", "expected a theory object or a file path")

    contacts = obj.get("contacts", [])
    if not isinstance(contacts, list) or not all(isinstance(c, list) and len(c) == 2 for c in contacts):
        raise FileFormatError(f"{path}.contacts", "expected a list of [target, thermometer] pairs")
    try:
        conj = conjoin(part("target"), part("thermometer"), [tuple(c) for c in contacts],
                       one_way=bool(obj.get("one_way", False)))
    except FileFormatError:
        raise
    except TheoryError as exc:
        raise FileFormatError(str(path), str(exc)) from None
    cal = obj.get("calibration")
    calibration = None if cal is None else {str(k): _rat(v, f"{path}.calibration.{k}") for k, v in cal.items()}
    return conj, calibration
