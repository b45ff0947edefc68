"""Numeric process families that converge to idealized cone elements.

Two constructions are provided:

* heat conduction across a thin barrier: sub-bodies of shrinking width
  observed over shrinking time windows, rescaled so that the limit is a pure
  heat transfer ``(0, alpha * (dirac(s') - dirac(s)))``;
* a stirred reactor whose temperature is ramped quickly, whose limit is a
  reversible heating at frozen composition.

Continuous states are mapped onto a finite state space by a
``QuantizationGrid``.  Everything here works in floats; ``rationalize``
converts results into exact ``ProcessVector`` values for the decision code.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from .core import ProcessVector, SignedMeasure, StateSpace, Theory, TheoryError
from .fixtures import BUILTINS, builtin  # noqa: F401  re-exported

DENOMINATOR = 10 ** 6
RENORM_LIMIT = 1e-9
SIMPSON_PANELS = 256
RK4_STEPS = 200


class ScenarioError(TheoryError):
    pass


def _coords(x) -> tuple[float, ...]:
    if isinstance(x, (int, float, np.floating, np.integer)):
        return (float(x),)
    return tuple(float(v) for v in x)


@dataclass(frozen=True)
class QuantizationGrid:
    """Per-coordinate bin edges; a point belongs to the bin with the nearest center."""

    edges: tuple[tuple[float, ...], ...]
    tolerance: float = 1e-9

    def __post_init__(self):
        edges = tuple(tuple(float(e) for e in axis) for axis in self.edges)
        if not edges:
            raise ScenarioError("grid needs at least one coordinate")
        for axis in edges:
            if len(axis) < 2 or any(b <= a for a, b in zip(axis, axis[1:])):
                raise ScenarioError("bin edges must be strictly increasing, at least two per axis")
        object.__setattr__(self, "edges", edges)

    @classmethod
    def uniform(cls, lo: float, hi: float, bins: int) -> QuantizationGrid:
        return cls((tuple(np.linspace(lo, hi, bins + 1)),))

    def centers(self, axis: int) -> np.ndarray:
        e = np.asarray(self.edges[axis])
        return (e[:-1] + e[1:]) / 2

    def index(self, point) -> tuple[int, ...]:
        p = _coords(point)
        if len(p) != len(self.edges):
            raise ScenarioError(f"point {p} has {len(p)} coordinates, grid has {len(self.edges)}")
        out = []
        for x, axis in zip(p, self.edges):
            if not (axis[0] - self.tolerance <= x <= axis[-1] + self.tolerance) or math.isnan(x):
                raise ScenarioError(f"coordinate {x} lies outside [{axis[0]}, {axis[-1]}]")
            c = (np.asarray(axis[:-1]) + np.asarray(axis[1:])) / 2
            out.append(int(np.argmin(np.abs(c - x))))
        return tuple(out)

    def label(self, point) -> str:
        return "b" + "_".join(str(i) for i in self.index(point))

    def label_of_index(self, idx: Sequence[int]) -> str:
        return "b" + "_".join(str(i) for i in idx)

    def center_of(self, label: str) -> tuple[float, ...]:
        idx = [int(i) for i in label[1:].split("_")]
        return tuple(float(self.centers(a)[i]) for a, i in enumerate(idx))

    def state_space(self) -> StateSpace:
        """Every bin as a state, with its center stored as metadata."""
        labels, meta = [], {}
        for idx in np.ndindex(*(len(a) - 1 for a in self.edges)):
            s = self.label_of_index(idx)
            labels.append(s)
            meta[s] = tuple(float(self.centers(a)[i]) for a, i in enumerate(idx))
        return StateSpace(tuple(labels), meta)


@dataclass
class FloatProcess:
    """Process vector with float masses, keyed by bin label."""

    dm: dict[str, float] = field(default_factory=dict)
    q: dict[str, float] = field(default_factory=dict)

    def add_dm(self, label: str, value: float) -> None:
        self.dm[label] = self.dm.get(label, 0.0) + float(value)

    def add_q(self, label: str, value: float) -> None:
        self.q[label] = self.q.get(label, 0.0) + float(value)

    def scaled(self, k: float) -> FloatProcess:
        return FloatProcess({s: k * v for s, v in self.dm.items()}, {s: k * v for s, v in self.q.items()})

    def __neg__(self) -> FloatProcess:
        return self.scaled(-1.0)

    def labels(self) -> set[str]:
        return set(self.dm) | set(self.q)


def tv_distance(a: FloatProcess, b: FloatProcess) -> float:
    """Total-variation norm of the difference, summed over both components."""
    def part(x: Mapping[str, float], y: Mapping[str, float]) -> float:
        return sum(abs(x.get(s, 0.0) - y.get(s, 0.0)) for s in set(x) | set(y))
    return part(a.dm, b.dm) + part(a.q, b.q)


def max_abs_difference(a: FloatProcess, b: FloatProcess) -> float:
    diffs = [abs(a.dm.get(s, 0.0) - b.dm.get(s, 0.0)) for s in set(a.dm) | set(b.dm)]
    diffs += [abs(a.q.get(s, 0.0) - b.q.get(s, 0.0)) for s in set(a.q) | set(b.q)]
    return max(diffs, default=0.0)


@dataclass(frozen=True)
class Rationalized:
    vector: ProcessVector
    rounding_error: float  # largest |float - rational| over all entries
    renormalization: float  # |float total of dm| removed before rounding


def rationalize(p: FloatProcess, denominator: int = DENOMINATOR) -> Rationalized:
    """Round to rationals with bounded denominator, keeping ``total(dm) == 0`` exact."""
    drift = sum(p.dm.values())
    if abs(drift) >= RENORM_LIMIT:
        raise ScenarioError(f"dm total {drift:.3e} is too large to renormalize")

    def rnd(x: float) -> Fraction:
        return Fraction(x).limit_denominator(denominator)

    dm = {s: rnd(v) for s, v in p.dm.items()}
    q = {s: rnd(v) for s, v in p.q.items()}
    residual = sum(dm.values(), Fraction(0))
    if residual and dm:
        big = max(dm, key=lambda s: (abs(p.dm[s]), s))
        dm[big] -= residual
    err = max([abs(float(dm[s]) - p.dm[s]) for s in dm] + [abs(float(q[s]) - p.q[s]) for s in q],
              default=0.0)
    return Rationalized(ProcessVector(SignedMeasure(dm), SignedMeasure(q)), err, abs(drift))


def _renormalize(p: FloatProcess) -> FloatProcess:
    """Spread the float drift of ``total(dm)`` over the support."""
    drift = sum(p.dm.values())
    if abs(drift) >= RENORM_LIMIT:
        raise ScenarioError(f"dm total {drift:.3e} exceeds renormalization limit")
    if drift and p.dm:
        mass = sum(abs(v) for v in p.dm.values())
        p.dm = {s: v - drift * abs(v) / mass for s, v in p.dm.items()}
    return p


def simpson_weights(a: float, b: float, panels: int) -> tuple[np.ndarray, np.ndarray]:
    if panels <= 0 or panels % 2:
        raise ScenarioError("Simpson needs a positive even number of panels")
    x = np.array([a + (b - a) * i / panels for i in range(panels + 1)])
    w = np.ones(panels + 1)
    w[1:-1:2], w[2:-1:2] = 4.0, 2.0
    return x, w * (b - a) / (3 * panels)


# Conduction across a barrier.

Field = Callable[[float, float], object]


@dataclass(frozen=True)
class ConductionFields:
    """Material state on either side of a barrier at ``x = 0`` and the heat flux there.

    ``left(x, t)`` is defined for ``x <= 0`` and ``right(x, t)`` for ``x >= 0``;
    both return a point of the grid's coordinate space.  ``flux(x, t)`` is
    the conductive flux rate, taken as given.
    """

    left: Field
    right: Field
    flux: Callable[[float, float], float]
    rho_left: float = 1.0
    rho_right: float = 1.0
    area: float = 1.0
    length: float = 1.0
    t_max: float = 1.0


def linear_fields(flux_drift: float = 0.5) -> ConductionFields:
    """Fields varying linearly in ``x`` and ``t``; pairs with ``default_conduction_grid``."""
    return ConductionFields(
        left=lambda x, t: 1.625 + 0.5 * x + 0.4 * t,
        right=lambda x, t: 0.375 + 0.5 * x + 0.4 * t,
        flux=lambda x, t: 1.0 + 0.25 * x + flux_drift * t,
    )


def constant_fields(left: float = 1.625, right: float = 0.375, flux: float = 1.0) -> ConductionFields:
    return ConductionFields(lambda x, t: left, lambda x, t: right, lambda x, t: flux)


def default_conduction_grid() -> QuantizationGrid:
    return QuantizationGrid.uniform(0.0, 2.0, 8)


def conduction_element(fields: ConductionFields, grid: QuantizationGrid, xi: float, tau: float,
                       alpha: float = 1.0, panels: int = SIMPSON_PANELS) -> FloatProcess:
    """Binned, rescaled descriptor of the sub-body ``[-xi, xi]`` over ``[-tau, tau]``."""
    f = fields
    r0 = f.flux(0.0, 0.0)
    if not r0 > 0:
        raise ScenarioError(f"flux at the barrier must be positive, got {r0}")
    if not (0 < xi < f.length and 0 < tau < f.t_max):
        raise ScenarioError("need 0 < xi < L and 0 < tau < t*")
    k = alpha / (2 * f.area * r0 * tau)
    out = FloatProcess()
    ts, wt = simpson_weights(-tau, tau, panels)
    for t, w in zip(ts, wt):
        out.add_q(grid.label(f.left(-xi, t)), k * f.area * w * f.flux(-xi, t))
        out.add_q(grid.label(f.right(xi, t)), -k * f.area * w * f.flux(xi, t))
    for lo, hi, side, rho in ((-xi, 0.0, f.left, f.rho_left), (0.0, xi, f.right, f.rho_right)):
        xs, wx = simpson_weights(lo, hi, panels)
        for x, w in zip(xs, wx):
            out.add_dm(grid.label(side(x, tau)), k * rho * f.area * w)
            out.add_dm(grid.label(side(x, -tau)), -k * rho * f.area * w)
    out.dm = {s: v for s, v in out.dm.items() if v != 0.0}
    return _renormalize(out)


def conduction_limit(fields: ConductionFields, grid: QuantizationGrid, alpha: float = 1.0) -> FloatProcess:
    out = FloatProcess()
    out.add_q(grid.label(fields.left(0.0, 0.0)), alpha)
    out.add_q(grid.label(fields.right(0.0, 0.0)), -alpha)
    return out


def dm_bound(fields: ConductionFields, n: int, alpha: float = 1.0) -> float:
    """Upper bound on the TV norm of the rescaled mass change at step ``n``."""
    xi, tau = 1.0 / n ** 2, 1.0 / n
    return 2 * alpha / fields.flux(0.0, 0.0) * (fields.rho_left + fields.rho_right) * xi / tau


def appendix_a_sequence(n_max: int, fields: ConductionFields | None = None,
                        grid: QuantizationGrid | None = None, alpha: float = 1.0,
                        ns: Sequence[int] | None = None,
                        panels: int = SIMPSON_PANELS) -> list[tuple[int, FloatProcess]]:
    """Elements for ``tau = 1/n`` and ``xi = 1/n^2``, for ``n`` in ``ns`` (default ``1..n_max``)."""
    fields = fields or linear_fields()
    grid = grid or default_conduction_grid()
    ns = list(ns) if ns is not None else list(range(1, n_max + 1))
    out = []
    for n in ns:
        xi, tau = 1.0 / n ** 2, 1.0 / n
        if xi >= fields.length or tau >= fields.t_max:
            continue
        out.append((n, conduction_element(fields, grid, xi, tau, alpha, panels)))
    return out


# Stirred reactor with a temperature ramp.

@dataclass(frozen=True)
class ReactorModel:
    """Well-mixed reactor: molar concentrations ``c`` and temperature ``theta``.

    ``rates(c, theta)`` gives dc/dt; ``energy(c, theta)`` is the internal
    energy per unit volume with partial derivatives ``energy_dtheta`` and
    ``energy_dc``.
    """

    weights: tuple[float, ...]
    rates: Callable[[np.ndarray, float], np.ndarray]
    energy: Callable[[np.ndarray, float], float]
    energy_dtheta: Callable[[np.ndarray, float], float]
    energy_dc: Callable[[np.ndarray, float], np.ndarray]
    density: float = 1.0
    volume: float = 1.0
    density_bound: float = 10.0
    interval: tuple[float, float] = (0.5, 2.5)

    @property
    def species(self) -> int:
        return len(self.weights)

    def in_domain(self, c: np.ndarray, tol: float = 1e-12) -> bool:
        return bool(np.all(c >= -tol) and float(np.dot(self.weights, c)) <= self.density_bound + tol)

    def check(self, samples: Sequence[tuple[Sequence[float], float]], tol: float = 1e-12) -> list[str]:
        """Invariant violations at the sampled ``(c, theta)`` points."""
        problems = []
        m = np.asarray(self.weights, dtype=float)
        if np.any(m <= 0):
            problems.append("molecular weights must be positive")
        for c, th in samples:
            c = np.asarray(c, dtype=float)
            f = self.rates(c, th)
            if abs(float(m @ f)) > tol:
                problems.append(f"mass not conserved at c={c.tolist()}, theta={th}")
            for i in range(len(c)):
                if c[i] == 0 and f[i] < -tol:
                    problems.append(f"species {i} would go negative at c={c.tolist()}, theta={th}")
            if not self.energy_dtheta(c, th) > 0:
                problems.append(f"heat capacity not positive at c={c.tolist()}, theta={th}")
        return problems


def default_reactor() -> ReactorModel:
    """Isomerization A <-> B with forward rate ``theta`` and unit backward rate."""
    return ReactorModel(
        weights=(1.0, 1.0),
        rates=lambda c, th: np.array([-th * c[0] + c[1], th * c[0] - c[1]]),
        energy=lambda c, th: c[0] * (1 + th) + c[1] * (2 + th),
        energy_dtheta=lambda c, th: c[0] + c[1],
        energy_dc=lambda c, th: np.array([1 + th, 2 + th]),
    )


def frozen_reactor() -> ReactorModel:
    base = default_reactor()
    return ReactorModel(base.weights, lambda c, th: np.zeros(2), base.energy,
                        base.energy_dtheta, base.energy_dc)


def default_reactor_grid() -> QuantizationGrid:
    """One bin per concentration axis and quarter-unit temperature bins centered on 1..2."""
    return QuantizationGrid(((0.0, 1.0), (0.0, 1.0), tuple(0.875 + 0.25 * i for i in range(6))))


def _theta_nodes(theta0: float, theta1: float, steps: int) -> list[float]:
    return [theta0 + (theta1 - theta0) * i / steps for i in range(steps + 1)]


def reactor_trajectory(model: ReactorModel, c0: Sequence[float], theta0: float, theta1: float,
                       eps: float, steps: int = RK4_STEPS) -> tuple[np.ndarray, list[float]]:
    """RK4 for dc/dt under the linear ramp over ``[0, eps]``; returns nodes ``c_i`` and ``theta_i``."""
    h = eps / steps
    slope = (theta1 - theta0) / eps
    c = np.asarray(c0, dtype=float)
    if not model.in_domain(c):
        raise ScenarioError(f"initial composition {c.tolist()} is outside the admissible set")
    path = [c]
    for i in range(steps):
        t = i * h
        th = theta0 + slope * t
        k1 = model.rates(c, th)
        k2 = model.rates(c + h / 2 * k1, th + slope * h / 2)
        k3 = model.rates(c + h / 2 * k2, th + slope * h / 2)
        k4 = model.rates(c + h * k3, th + slope * h)
        nxt = c + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        if not model.in_domain(nxt):
            raise ScenarioError(f"step {i + 1} rejected: composition {nxt.tolist()} left the admissible set")
        c = nxt
        path.append(c)
    return np.array(path), _theta_nodes(theta0, theta1, steps)


def _reactor_label(grid: QuantizationGrid, c: np.ndarray, th: float) -> str:
    return grid.label(tuple(c) + (th,))


def reactor_element(model: ReactorModel, c0: Sequence[float], theta0: float, theta1: float,
                    eps: float, grid: QuantizationGrid, steps: int = RK4_STEPS) -> FloatProcess:
    path, thetas = reactor_trajectory(model, c0, theta0, theta1, eps, steps)
    slope = (theta1 - theta0) / eps
    alpha = model.volume * model.density
    _, w = simpson_weights(0.0, eps, steps)
    out = FloatProcess()
    for c, th, wi in zip(path, thetas, w):
        heat = model.energy_dtheta(c, th) * slope + float(model.energy_dc(c, th) @ model.rates(c, th))
        out.add_q(_reactor_label(grid, c, th), model.volume * heat * wi)
    out.add_dm(_reactor_label(grid, path[-1], thetas[-1]), alpha)
    out.add_dm(_reactor_label(grid, path[0], thetas[0]), -alpha)
    out.dm = {s: v for s, v in out.dm.items() if v != 0.0}
    return out


def reactor_limit(model: ReactorModel, c0: Sequence[float], theta0: float, theta1: float,
                  grid: QuantizationGrid, steps: int = RK4_STEPS) -> FloatProcess:
    """Heating at frozen composition ``c0`` while the temperature moves from ``theta0`` to ``theta1``."""
    c = np.asarray(c0, dtype=float)
    thetas = _theta_nodes(theta0, theta1, steps)
    _, w = simpson_weights(theta0, theta1, steps)
    alpha = model.volume * model.density
    out = FloatProcess()
    for th, wi in zip(thetas, w):
        out.add_q(_reactor_label(grid, c, th), model.volume * model.energy_dtheta(c, th) * wi)
    out.add_dm(_reactor_label(grid, c, theta1), alpha)
    out.add_dm(_reactor_label(grid, c, theta0), -alpha)
    out.dm = {s: v for s, v in out.dm.items() if v != 0.0}
    return out


def appendix_c_sequence(model: ReactorModel | None = None, c0: Sequence[float] = (0.5, 0.5),
                        theta0: float = 1.0, theta1: float = 2.0,
                        eps_list: Sequence[float] = (0.1, 0.05, 0.025),
                        grid: QuantizationGrid | None = None
                        ) -> tuple[list[tuple[float, FloatProcess]], FloatProcess]:
    model = model or default_reactor()
    grid = grid or default_reactor_grid()
    lo, hi = model.interval
    if not (lo < theta0 < hi and lo < theta1 < hi):
        raise ScenarioError(f"temperatures must lie inside {model.interval}")
    c = np.asarray(c0, dtype=float)
    if abs(float(np.dot(model.weights, c)) - model.density) > 1e-12:
        raise ScenarioError("initial composition does not have the model's density")
    seq = [(e, reactor_element(model, c0, theta0, theta1, e, grid)) for e in eps_list]
    return seq, reactor_limit(model, c0, theta0, theta1, grid)


def convergence_ratios(errors: Sequence[float]) -> list[float]:
    return [b / a for a, b in zip(errors, errors[1:])]


def to_theory(grid: QuantizationGrid, vectors: Sequence[ProcessVector], true_process: bool = True) -> Theory:
    """Theory over the bins the vectors touch, with bin centers as metadata."""
    used = set()
    for v in vectors:
        used |= v.labels()
    space = grid.state_space()
    labels = tuple(s for s in space.labels if s in used)
    if not labels:
        raise ScenarioError("no states touched")
    meta = {s: space.metadata[s] for s in labels}
    return Theory(StateSpace(labels, meta), tuple((v, true_process) for v in vectors))
