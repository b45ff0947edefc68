"""Conjoining a target theory with a thermometer through contact processes.

Contacts are passive heat transfers between a target state and a
thermometer state.  By default each contact is added in both directions,
which makes its two endpoints equally hot in the combined theory.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .cdsynth import Violating, check_kp, require_kp
from .core import Generator, StateSpace, Theory, TheoryError, as_rational, require_valid
from .hotness import HotnessPartition, OrderReport, order_report, same_hotness, transfer, weakly_hotter
from .uniqueness import temp_unique

PART1, PART2 = "part1", "part2"


class PreconditionError(TheoryError):
    pass


@dataclass(frozen=True)
class Conjunction:
    theory: Theory
    part1: tuple[str, ...]
    part2: tuple[str, ...]
    contacts: tuple[tuple[str, str], ...]
    target: Theory = field(compare=False)
    thermometer: Theory = field(compare=False)
    one_way: bool = False


def conjoin(t1: Theory, t2: Theory, contacts: Iterable[tuple[str, str]] = (),
            one_way: bool = False) -> Conjunction:
    """Disjoint union of ``t1`` (target) and ``t2`` (thermometer) plus contact transfers.

    With ``one_way`` a contact ``(a, b)`` only lets heat pass from ``a`` to ``b``.
    """
    clash = set(t1.states.labels) & set(t2.states.labels)
    if clash:
        raise TheoryError(f"state labels used by both theories: {sorted(clash)}")
    contacts = tuple((str(a), str(b)) for a, b in contacts)
    for a, b in contacts:
        if a not in t1.states or b not in t2.states:
            raise TheoryError(f"contact ({a}, {b}) must join a target state to a thermometer state")
    meta = {**dict(t1.states.metadata), **dict(t2.states.metadata)}
    space = StateSpace(t1.states.labels + t2.states.labels, meta)
    gens = list(t1.generators) + list(t2.generators)
    for a, b in contacts:
        gens.append(Generator(transfer(a, b)))
        if not one_way:
            gens.append(Generator(transfer(b, a)))
    theory = Theory(space, tuple(gens), ((PART1, t1.states.labels), (PART2, t2.states.labels)))
    require_valid(theory)
    return Conjunction(theory, t1.states.labels, t2.states.labels, contacts, t1, t2, one_way)


@dataclass(frozen=True)
class ThermometerVerdict:
    ok: bool
    pairing: Mapping[str, str]
    uncovered: tuple[str, ...] = ()


def is_thermometer(c: Conjunction) -> ThermometerVerdict:
    require_kp(c.theory)
    pairing, missing = {}, []
    for s in c.part1:
        first = [b for a, b in c.contacts if a == s]
        rest = [b for b in c.part2 if b not in first]
        hit = next((b for b in first + rest if same_hotness(c.theory, s, b)), None)
        if hit is None:
            missing.append(s)
        else:
            pairing[s] = hit
    return ThermometerVerdict(not missing, pairing, tuple(missing))


def _require_thermometer(c: Conjunction) -> ThermometerVerdict:
    v = is_thermometer(c)
    if not v.ok:
        raise PreconditionError(f"not a thermometer: target states {list(v.uncovered)} share no level "
                                "with a thermometer state")
    return v


def imparted_order(c: Conjunction) -> OrderReport:
    """Hotness order that the conjunction induces on the target states."""
    _require_thermometer(c)
    if not order_report(c.thermometer).is_total():
        raise PreconditionError("thermometer levels are not totally ordered")
    full = order_report(c.theory)
    part1 = set(c.part1)
    keep = {cls: tuple(s for s in cls if s in part1) for cls in full.partition.classes}
    keep = {k: v for k, v in keep.items() if v}

    def restrict(edges):
        return frozenset((keep[a], keep[b]) for a, b in edges if a in keep and b in keep)

    return OrderReport(HotnessPartition(tuple(keep.values())), restrict(full.strict_edges),
                       restrict(full.weak_edges), restrict(full.strong_edges))


@dataclass(frozen=True)
class ImpartedScale:
    beta: Mapping[str, Fraction] | None
    unique: bool
    reason: str = ""

    def temperatures(self) -> dict[str, Fraction] | None:
        return None if self.beta is None else {s: 1 / b for s, b in self.beta.items()}


def imparted_scale(c: Conjunction, calibration: Mapping[str, object] | None = None) -> ImpartedScale:
    """Coldness on the target states read off an ideal thermometer.

    Without ``calibration`` the result is normalized to 1 at the first target
    state.  A ``calibration`` gives the thermometer's own coldness values; the
    result is then expressed in those units.
    """
    verdict = is_thermometer(c)
    if not verdict.ok:
        return ImpartedScale(None, False, "not a thermometer")
    if not temp_unique(c.thermometer).unique:
        return ImpartedScale(None, False, "thermometer is not ideal: its scale is not unique")
    if not temp_unique(c.theory).unique:
        return ImpartedScale(None, False, "conjunction scale is not unique")
    if not c.part1:
        return ImpartedScale({}, True)
    beta = require_kp(c.theory).pair.beta
    if calibration is None:
        k = 1 / beta[c.part1[0]]
    else:
        cal = {str(s): as_rational(v) for s, v in calibration.items()}
        ref = c.part2[0]
        k = cal[ref] / beta[ref]
        if any(cal[s] != k * beta[s] for s in c.part2):
            raise PreconditionError("calibration is not a scale of the thermometer")
    return ImpartedScale({s: k * beta[s] for s in c.part1}, True)


def joint_theory(c1: Conjunction, c2: Conjunction) -> Theory:
    """Target plus both thermometers, containing both conjunctions' generators."""
    if c1.part1 != c2.part1:
        raise TheoryError("conjunctions must share the same target states")
    clash = set(c1.part2) & set(c2.part2)
    if clash:
        raise TheoryError(f"thermometer labels overlap: {sorted(clash)}")
    meta = {**dict(c1.theory.states.metadata), **dict(c2.theory.states.metadata)}
    space = StateSpace(c1.part1 + c1.part2 + c2.part2, meta)
    gens = list(c1.theory.generators)
    seen = {g.vector for g in gens}
    gens += [g for g in c2.theory.generators if g.vector not in seen]
    parts = ((PART1, c1.part1), ("thermometer1", c1.part2), ("thermometer2", c2.part2))
    theory = Theory(space, tuple(gens), parts)
    require_valid(theory)
    return theory


@dataclass(frozen=True)
class ConsistencyReport:
    compatible: bool
    violating: Violating | None = None
    orders_agree: bool | None = None
    order_discrepancy: tuple[str, str] | None = None
    scales_compared: bool = False
    proportional: bool | None = None
    ratio: Fraction | None = None
    scale_discrepancy: tuple[str, str] | None = None

    @property
    def consistent(self) -> bool:
        return self.compatible and bool(self.orders_agree) and self.proportional is not False


def _state_edges(report: OrderReport) -> set[tuple[str, str]]:
    return {(a, b) for hot, cold in report.strict_edges for a in hot for b in cold}


def consistency_check(c1: Conjunction, c2: Conjunction, joint: Theory | None = None,
                      calibrations: Sequence[Mapping[str, object] | None] = (None, None)) -> ConsistencyReport:
    joint = joint if joint is not None else joint_theory(c1, c2)
    verdict = check_kp(joint)
    if isinstance(verdict, Violating):
        return ConsistencyReport(False, verdict)
    e1, e2 = _state_edges(imparted_order(c1)), _state_edges(imparted_order(c2))
    diff = sorted(e1 ^ e2)
    report = dict(compatible=True, orders_agree=not diff, order_discrepancy=diff[0] if diff else None)
    s1, s2 = imparted_scale(c1, calibrations[0]), imparted_scale(c2, calibrations[1])
    if s1.beta is not None and s2.beta is not None and c1.part1:
        ref = c1.part1[0]
        ratio = s2.beta[ref] / s1.beta[ref]
        bad = next((s for s in c1.part1 if s2.beta[s] != ratio * s1.beta[s]), None)
        report.update(scales_compared=True, proportional=bad is None, ratio=ratio,
                      scale_discrepancy=None if bad is None else (ref, bad))
    return ConsistencyReport(**report)


@dataclass(frozen=True)
class ComparabilityConditions:
    comparable: bool
    bracketed: bool
    incomparable_pair: tuple[str, str] | None = None
    unbracketed: str | None = None


def comparability_conditions(c: Conjunction) -> ComparabilityConditions:
    """State-level weak-hotness conditions under which a conjunction is a thermometer.

    ``comparable``: every target/thermometer pair not of equal hotness is
    weakly ordered one way or the other.  ``bracketed``: every target state
    has a thermometer state weakly above it and one weakly below it.
    """
    t = c.theory
    require_kp(t)
    bad_pair, bad_state = None, None
    for s in c.part1:
        above = below = False
        for th in c.part2:
            up = weakly_hotter(t, [th], [s]) is not None
            down = weakly_hotter(t, [s], [th]) is not None
            above, below = above or up, below or down
            if not (up or down) and bad_pair is None and not same_hotness(t, s, th):
                bad_pair = (s, th)
        if not (above and below) and bad_state is None:
            bad_state = s
    return ComparabilityConditions(bad_pair is None, bad_state is None, bad_pair, bad_state)
