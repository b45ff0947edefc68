"""Domain types: finite state spaces, signed measures, process vectors, theories.

All scalars are exact ``fractions.Fraction`` values.  A theory's cone is
generated by finitely many vectors, so it is already closed; nothing in the
package ever computes a closure.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

Rational = Fraction


class TheoryError(ValueError):
    """Raised for malformed theories or inputs that reference unknown states."""


class StateMismatch(TheoryError):
    pass


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected so that decision code never silently absorbs
    binary rounding.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise TheoryError(f"not a rational: {value!r}") from exc
    if hasattr(value, "numerator") and hasattr(value, "denominator") and not isinstance(value, float):
        return Fraction(int(value.numerator), int(value.denominator))
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def format_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class SignedMeasure(Mapping[str, Fraction]):
    """Finitely supported signed measure; absent labels carry zero mass."""

    __slots__ = ("_entries", "_hash")

    def __init__(self, entries: Mapping[str, object] | Iterable[tuple[str, object]] = ()):
        items = entries.items() if isinstance(entries, Mapping) else entries
        data: dict[str, Fraction] = {}
        for label, value in items:
            key = str(label)
            data[key] = data.get(key, Fraction(0)) + as_rational(value)
        self._entries = {k: v for k, v in data.items() if v}
        self._hash = None

    def __getitem__(self, label: str) -> Fraction:
        return self._entries.get(label, Fraction(0))

    def __iter__(self) -> Iterator[str]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, label) -> bool:
        return label in self._entries

    def __eq__(self, other) -> bool:
        if isinstance(other, SignedMeasure):
            return self._entries == other._entries
        if isinstance(other, Mapping):
            return self._entries == {k: as_rational(v) for k, v in other.items() if as_rational(v)}
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._entries.items()))
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(f"{k}: {format_rational(v)}" for k, v in sorted(self._entries.items()))
        return "{" + body + "}"

    def __add__(self, other: SignedMeasure) -> SignedMeasure:
        out = dict(self._entries)
        for k, v in other._entries.items():
            out[k] = out.get(k, Fraction(0)) + v
        return SignedMeasure(out)

    def __neg__(self) -> SignedMeasure:
        return SignedMeasure({k: -v for k, v in self._entries.items()})

    def __sub__(self, other: SignedMeasure) -> SignedMeasure:
        return self + (-other)

    def scale(self, factor) -> SignedMeasure:
        f = as_rational(factor)
        return SignedMeasure({k: f * v for k, v in self._entries.items()})

    __rmul__ = scale

    def support(self) -> frozenset[str]:
        return frozenset(self._entries)

    def dot(self, weights: Mapping[str, Fraction]) -> Fraction:
        return sum((v * weights.get(k, 0) for k, v in self._entries.items()), Fraction(0))

    def restrict(self, labels: Iterable[str]) -> SignedMeasure:
        keep = set(labels)
        return SignedMeasure({k: v for k, v in self._entries.items() if k in keep})

    def is_nonnegative(self) -> bool:
        return all(v > 0 for v in self._entries.values())


def total(m: SignedMeasure) -> Fraction:
    return sum(m.values(), Fraction(0))


@dataclass(frozen=True)
class StateSpace:
    labels: tuple[str, ...]
    metadata: Mapping[str, tuple[float, ...]] = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        labels = tuple(str(s) for s in self.labels)
        object.__setattr__(self, "labels", labels)
        if not labels:
            raise TheoryError("state space must be nonempty")
        if len(set(labels)) != len(labels):
            raise TheoryError("state labels must be distinct")
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(labels)})

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __contains__(self, label) -> bool:
        return label in self._index

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise StateMismatch(f"unknown state {label!r}") from None

    def sort(self, labels: Iterable[str]) -> tuple[str, ...]:
        return tuple(sorted(labels, key=self.index))

    def check(self, labels: Iterable[str]) -> None:
        for s in labels:
            self.index(s)


def dirac(space: StateSpace, label: str) -> SignedMeasure:
    space.index(label)
    return SignedMeasure({label: 1})


@dataclass(frozen=True)
class ProcessVector:
    dm: SignedMeasure
    q: SignedMeasure

    def __init__(self, dm=(), q=()):
        object.__setattr__(self, "dm", dm if isinstance(dm, SignedMeasure) else SignedMeasure(dm))
        object.__setattr__(self, "q", q if isinstance(q, SignedMeasure) else SignedMeasure(q))

    def __add__(self, other: ProcessVector) -> ProcessVector:
        return ProcessVector(self.dm + other.dm, self.q + other.q)

    def __neg__(self) -> ProcessVector:
        return ProcessVector(-self.dm, -self.q)

    def __sub__(self, other: ProcessVector) -> ProcessVector:
        return self + (-other)

    def scale(self, factor) -> ProcessVector:
        return ProcessVector(self.dm.scale(factor), self.q.scale(factor))

    __rmul__ = scale

    def labels(self) -> frozenset[str]:
        return self.dm.support() | self.q.support()

    def is_zero(self) -> bool:
        return not self.dm and not self.q


ZERO = ProcessVector()


def cyclic(q) -> ProcessVector:
    """Process vector with no change of condition."""
    return ProcessVector({}, q)


@dataclass(frozen=True)
class Generator:
    vector: ProcessVector
    true_process: bool = True


@dataclass(frozen=True)
class Theory:
    """A finite state space together with the generators of its process cone.

    ``parts`` is only set for conjunctions: it names disjoint groups of
    states on each of which every generator's mass change must vanish.
    """

    states: StateSpace
    generators: tuple[Generator, ...] = ()
    parts: tuple[tuple[str, tuple[str, ...]], ...] = ()

    def __post_init__(self):
        gens = tuple(g if isinstance(g, Generator) else Generator(*g) for g in self.generators)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "parts", tuple((str(n), tuple(ls)) for n, ls in self.parts))

    @property
    def vectors(self) -> tuple[ProcessVector, ...]:
        return tuple(g.vector for g in self.generators)

    def extend(self, vectors: Iterable[ProcessVector], true_process: bool = False) -> Theory:
        extra = tuple(Generator(v, true_process) for v in vectors)
        return Theory(self.states, self.generators + extra, self.parts)

    def part(self, name: str) -> tuple[str, ...]:
        for n, labels in self.parts:
            if n == name:
                return labels
        raise KeyError(name)


def make_theory(states: Sequence[str], vectors: Iterable, true_process: bool = True, **kw) -> Theory:
    gens = []
    for v in vectors:
        if isinstance(v, Generator):
            gens.append(v)
        elif isinstance(v, ProcessVector):
            gens.append(Generator(v, true_process))
        else:
            dm, q = v
            gens.append(Generator(ProcessVector(dm, q), true_process))
    return Theory(StateSpace(tuple(states)), tuple(gens), **kw)


@dataclass(frozen=True)
class Violation:
    generator: int | None
    message: str

    def __str__(self) -> str:
        where = "theory" if self.generator is None else f"generator {self.generator}"
        return f"{where}: {self.message}"


def validate_theory(t: Theory) -> list[Violation]:
    """Return every invariant violation; an empty list means the theory is valid."""
    out: list[Violation] = []
    seen: set[str] = set()
    for name, labels in t.parts:
        for s in labels:
            if s not in t.states:
                out.append(Violation(None, f"part {name} names unknown state {s!r}"))
            if s in seen:
                out.append(Violation(None, f"state {s!r} belongs to two parts"))
            seen.add(s)
    for k, g in enumerate(t.generators):
        unknown = sorted(s for s in g.vector.labels() if s not in t.states)
        if unknown:
            out.append(Violation(k, f"unknown states {unknown}"))
            continue
        if total(g.vector.dm) != 0:
            out.append(Violation(k, "Δm total ≠ 0"))
        for name, labels in t.parts:
            if total(g.vector.dm.restrict(labels)) != 0:
                out.append(Violation(k, f"Δm total on part {name} ≠ 0"))
    return out


def require_valid(t: Theory) -> None:
    problems = validate_theory(t)
    if problems:
        raise TheoryError("; ".join(map(str, problems)))


def check_vector(t: Theory, v: ProcessVector) -> None:
    t.states.check(v.labels())


@dataclass(frozen=True)
class CDPair:
    """Entropy per state and coldness (reciprocal temperature) per state."""

    eta: Mapping[str, Fraction]
    beta: Mapping[str, Fraction]

    def __init__(self, eta: Mapping[str, object], beta: Mapping[str, object]):
        e = {str(k): as_rational(v) for k, v in eta.items()}
        b = {str(k): as_rational(v) for k, v in beta.items()}
        bad = [k for k, v in b.items() if v <= 0]
        if bad:
            raise TheoryError(f"coldness must be positive at {bad}")
        object.__setattr__(self, "eta", e)
        object.__setattr__(self, "beta", b)

    def __hash__(self) -> int:
        return hash((frozenset(self.eta.items()), frozenset(self.beta.items())))

    def temperature(self, label: str) -> Fraction:
        return 1 / self.beta[label]

    def inequality(self, v: ProcessVector) -> Fraction:
        """Value of ⟨η,Δm⟩ − ⟨β,q⟩; nonnegative exactly when v obeys the pair."""
        return v.dm.dot(self.eta) - v.q.dot(self.beta)

    def covers(self, space: StateSpace) -> bool:
        return all(s in self.beta for s in space) and all(s in self.eta for s in space)


def relabel(t: Theory, mapping: Mapping[str, str]) -> Theory:
    """Copy of ``t`` with states renamed; unmapped labels keep their names."""
    def rn(m: SignedMeasure) -> SignedMeasure:
        return SignedMeasure({mapping.get(k, k): v for k, v in m.items()})

    labels = tuple(mapping.get(s, s) for s in t.states)
    meta = {mapping.get(s, s): v for s, v in t.states.metadata.items()}
    gens = tuple(Generator(ProcessVector(rn(g.vector.dm), rn(g.vector.q)), g.true_process)
                 for g in t.generators)
    parts = tuple((n, tuple(mapping.get(s, s) for s in ls)) for n, ls in t.parts)
    return Theory(StateSpace(labels, meta), gens, parts)
