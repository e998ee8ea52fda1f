"""Belief recursion, belief grid and the discretized belief-MDP kernel.

The belief ``b`` is the posterior probability that the source is in
STATE1. The solver works on the grid of ``b`` values only: the next-state
distribution and the stage cost depend on the last observation solely
through ``b``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

import numpy as np

from .model import Action, ModelConfig, Observation, validate

ACTIONS = (Action.IDLE, Action.SENSOR1, Action.SENSOR2)
# absolute slack used to decide that ``b`` sits exactly between two grid points
MIDPOINT_TOL = 1e-9


class InfeasibleObservation(ValueError):
    """Raised for an (action, observation) pair that cannot occur."""


def phi(b: float, p: float) -> float:
    """One-step prediction of the belief through the symmetric source chain."""
    return p * b + (1.0 - p) * (1.0 - b)


def update_belief(b: float, a: Action, o: Observation, config: ModelConfig) -> float:
    a = Action(a)
    prior = phi(b, config.p)
    if o is Observation.FR:
        return prior
    if a is Action.IDLE:
        raise InfeasibleObservation(f"{o} cannot follow an idle slot")
    if o is Observation.OBS1:
        return 1.0
    if o is Observation.OBS2:
        return 0.0
    p1, p2 = config.detect[a.sensor]
    num = (1.0 - p1) * prior
    den = num + (1.0 - p2) * (1.0 - prior)
    if den <= 0.0:
        raise InfeasibleObservation(
            f"failed detection has zero probability for {a.name} at b={b}"
        )
    # clamp round-off so the posterior stays a probability
    return min(1.0, max(0.0, num / den))


def observation_distribution(
    b: float, a: Action, config: ModelConfig
) -> dict[Observation, float]:
    """Marginal distribution of the next observation given belief and action.

    Zero-probability outcomes are kept; callers that need a support set
    filter on ``> 0``.
    """
    a = Action(a)
    if a is Action.IDLE:
        return {Observation.FR: 1.0}
    f = phi(b, config.p)
    p1, p2 = config.detect[a.sensor]
    q = config.channel[a.sensor]
    return {
        Observation.OBS1: q * p1 * f,
        Observation.OBS2: q * p2 * (1.0 - f),
        Observation.FD: q * ((1.0 - p1) * f + (1.0 - p2) * (1.0 - f)),
        Observation.FR: 1.0 - q,
    }


@dataclass(frozen=True)
class BeliefGrid:
    """Points ``0, delta, 2*delta, ..., 1``; the last gap may be shorter.

    ``tie`` decides where a belief exactly between two points goes:
    ``"even"`` (default) picks the even index, which keeps quantization
    commuting with ``b -> 1 - b`` whenever ``1/delta`` is an even integer;
    ``"lower"`` always picks the lower index.
    """

    delta: float = 0.01
    tie: str = "even"

    def __post_init__(self):
        if not 0.0 < self.delta <= 1.0:
            raise ValueError(f"delta={self.delta} must lie in (0, 1]")
        if self.tie not in ("even", "lower"):
            raise ValueError(f"tie must be 'even' or 'lower', got {self.tie!r}")
        k = math.floor(1.0 / self.delta + MIDPOINT_TOL)
        pts = [round(i * self.delta, 12) for i in range(k + 1)]
        if 1.0 - pts[-1] > MIDPOINT_TOL:
            pts.append(1.0)
        else:
            pts[-1] = 1.0
        points = np.array(pts)
        points.setflags(write=False)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "_regular", len(pts) == k + 1)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[float]:
        return iter(self.points.tolist())

    def index_of(self, value: float) -> int:
        """Index of the grid point equal to ``value`` (nearest, for convenience)."""
        return quantize(value, self)

    def mirror(self) -> np.ndarray:
        """Index permutation ``i -> index of 1 - points[i]``."""
        return np.array([quantize(1.0 - b, self) for b in self.points])


def quantize(b: float, grid: BeliefGrid) -> int:
    """Nearest grid index; exact midpoints follow ``grid.tie``."""
    n = len(grid.points)
    if b <= 0.0:
        return 0
    if b >= 1.0:
        return n - 1
    if grid._regular:
        lo = min(int(b / grid.delta), n - 2)
    else:
        lo = int(np.searchsorted(grid.points, b, side="right")) - 1
        lo = min(max(lo, 0), n - 2)
    pts = grid.points
    # int() truncation can land one cell off near a point
    while lo > 0 and pts[lo] > b:
        lo -= 1
    while lo < n - 2 and pts[lo + 1] <= b:
        lo += 1
    below, above = b - pts[lo], pts[lo + 1] - b
    if abs(below - above) <= MIDPOINT_TOL:
        return lo if grid.tie == "lower" or lo % 2 == 0 else lo + 1
    return lo if below < above else lo + 1


@dataclass(frozen=True)
class BeliefTransitionEntry:
    next_index: int
    probability: float
    observations: tuple[Observation, ...]

    @property
    def observation(self) -> Observation:
        return self.observations[0]


class BeliefKernel:
    """Transition table of the discretized belief-MDP.

    ``entries[(i, a)]`` lists the merged transitions out of grid point ``i``
    under action ``a``; ``matrix[a]`` is the same data as a dense
    row-stochastic array of shape ``(n, n)``.
    """

    def __init__(self, grid: BeliefGrid, config: ModelConfig, entries, matrix):
        self.grid = grid
        self.config = config
        self.entries = entries
        self.matrix = matrix

    @property
    def n_states(self) -> int:
        return len(self.grid)

    def row(self, i: int, a: Action) -> tuple[BeliefTransitionEntry, ...]:
        return self.entries[(i, Action(a))]

    def iter_raw(self):
        """Yield ``(i, a, observation, next_belief, probability)`` before merging."""
        for i, b in enumerate(self.grid.points):
            for a in ACTIONS:
                for o, prob in observation_distribution(b, a, self.config).items():
                    if prob > 0.0:
                        yield i, a, o, update_belief(b, a, o, self.config), prob

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["belief", "action", "observation", "next_belief", "probability"])
            for i, a, o, nb, prob in self.iter_raw():
                nxt = self.grid.points[quantize(nb, self.grid)]
                w.writerow([f"{self.grid.points[i]:.12g}", a.name, o.value, f"{nxt:.12g}", repr(prob)])


def build_kernel(grid: BeliefGrid, config: ModelConfig) -> BeliefKernel:
    config = validate(config)
    n = len(grid)
    matrix = np.zeros((len(ACTIONS), n, n))
    entries = {}
    for i, b in enumerate(grid.points):
        for a in ACTIONS:
            merged: dict[int, list] = {}
            for o, prob in observation_distribution(b, a, config).items():
                if prob <= 0.0:
                    continue
                j = quantize(update_belief(b, a, o, config), grid)
                slot = merged.setdefault(j, [0.0, []])
                slot[0] += prob
                slot[1].append(o)
            row = tuple(
                BeliefTransitionEntry(j, prob, tuple(obs))
                for j, (prob, obs) in sorted(merged.items())
            )
            entries[(i, a)] = row
            for e in row:
                matrix[int(a), i, e.next_index] = e.probability
    matrix.setflags(write=False)
    return BeliefKernel(grid, config, entries, matrix)
