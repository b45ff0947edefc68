"""Built-in two-state fixture theories.

Two-state vectors are written in ``(x, q1, q2)`` coordinates with
``dm = x * (dirac(2) - dirac(1))``.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .core import CDPair, Generator, ProcessVector, StateSpace, Theory, TheoryError, as_rational, relabel

TWO = StateSpace(("1", "2"))
DEFAULT_ALPHAS = tuple(Fraction(a) for a in (-2, -1, 0, 1, 2))


def xq(x, q1, q2) -> ProcessVector:
    x = as_rational(x)
    return ProcessVector({"1": -x, "2": x}, {"1": q1, "2": q2})


def quadratic_family(alphas: Iterable = DEFAULT_ALPHAS) -> list[tuple[Fraction, ProcessVector]]:
    """Members ``(a^2, a-1, a+1)`` of the ``xi >= a^2`` family at each sampled ``a``."""
    out = []
    for a in alphas:
        a = as_rational(a)
        out.append((a, xq(a * a, a - 1, a + 1)))
    return out


def example_d1(alphas: Sequence | None = None) -> Theory:
    gens = [Generator(v, True) for _, v in quadratic_family(alphas or DEFAULT_ALPHAS)]
    gens.append(Generator(xq(1, 0, 0), True))  # xi -> infinity direction
    return Theory(TWO, tuple(gens))


def example_d2(alphas: Sequence | None = None) -> Theory:
    """Same cone as ``example_d1``; only the ``a != 0`` members are true processes."""
    gens = [Generator(v, a != 0) for a, v in quadratic_family(alphas or DEFAULT_ALPHAS)]
    gens.append(Generator(xq(1, 0, 0), False))
    return Theory(TWO, tuple(gens))


def halfspace() -> Theory:
    """Cone equal to the closed half-space of ``HALFSPACE_PAIR``."""
    vs = [xq(2, 1, 0), -xq(2, 1, 0), xq(1, 0, 1), -xq(1, 0, 1), xq(0, -1, 0)]
    return Theory(TWO, tuple(Generator(v) for v in vs))


HALFSPACE_PAIR = CDPair({"1": 0, "2": 1}, {"1": 2, "2": 1})


def two_state_transfer() -> Theory:
    return Theory(TWO, (Generator(ProcessVector({}, {"1": 1, "2": -1})),))


BUILTINS = {
    "example_d1": example_d1,
    "example_d2": example_d2,
    "halfspace": halfspace,
    "two_state_transfer": two_state_transfer,
}


def builtin(name: str, alphas: Sequence | None = None) -> Theory:
    try:
        make = BUILTINS[name]
    except KeyError:
        raise TheoryError(f"unknown builtin {name!r}; choose from {sorted(BUILTINS)}") from None
    if name.startswith("example_d"):
        return make(alphas)
    if alphas is not None:
        raise TheoryError(f"{name} takes no alpha grid")
    return make()


def target_pair() -> Theory:
    """Two target states with no processes of their own."""
    return Theory(StateSpace(("x", "y")))


def halfspace_thermometer(prefix: str) -> Theory:
    return relabel(halfspace(), {"1": f"{prefix}1", "2": f"{prefix}2"})
