"""Command rules: the grid-optimal policy and the belief-driven baselines."""

from __future__ import annotations

import numpy as np

from .belief import BeliefGrid, phi, quantize
from .model import Action, ModelConfig, SourceState
from .solver import Policy

POLICY_NAMES = ("optimal", "map", "greedy", "idle", "random")


def _best_sensor(scores: tuple[float, float]) -> Action:
    return Action.SENSOR1 if scores[0] >= scores[1] else Action.SENSOR2


def map_policy(b: float, config: ModelConfig) -> Action:
    """Predict the most likely next state, then pick the sensor best at detecting it.

    Ties go to STATE1 for the prediction and to SENSOR1 for the sensor.
    """
    f = phi(b, config.p)
    state = SourceState.STATE1 if f >= 1.0 - f else SourceState.STATE2
    col = int(state) - 1
    return _best_sensor((config.detect[0][col], config.detect[1][col]))


def expected_greedy_policy(b: float, config: ModelConfig) -> Action:
    """Sensor maximizing the predicted one-step detection probability."""
    f = phi(b, config.p)
    d = config.detect
    return _best_sensor(
        (d[0][0] * f + d[0][1] * (1 - f), d[1][0] * f + d[1][1] * (1 - f))
    )


def uniform_random_policy(rng: np.random.Generator) -> Action:
    return Action(int(rng.integers(3)))


class PolicyRule:
    """Decision rule ``b -> Action`` used by the simulator."""

    name = "custom"
    stochastic = False

    def __call__(self, b: float) -> Action:
        raise NotImplementedError

    def tabulate(self, grid: BeliefGrid) -> Policy:
        """Deterministic rule evaluated on every grid point."""
        if self.stochastic:
            raise TypeError(f"{self.name} is randomized; use action_weights()")
        provenance = {"map": "map", "greedy": "expected-greedy", "idle": "always-idle",
                      "optimal": "optimal"}.get(self.name, "custom")
        return Policy([int(self(b)) for b in grid.points], provenance)

    def reset(self) -> None:
        """Restore initial internal state (only randomized rules have any)."""


class BeliefRule(PolicyRule):
    def __init__(self, fn, config: ModelConfig, name: str):
        self.fn = fn
        self.config = config
        self.name = name

    def __call__(self, b: float) -> Action:
        return self.fn(b, self.config)


class ConstantRule(PolicyRule):
    def __init__(self, action: Action, name: str | None = None):
        self.action = Action(action)
        self.name = name or ("idle" if self.action is Action.IDLE else self.action.name.lower())

    def __call__(self, b: float) -> Action:
        return self.action


class GridRule(PolicyRule):
    """Look up a grid :class:`Policy` at the quantized belief."""

    def __init__(self, policy: Policy, grid: BeliefGrid, name: str = "optimal"):
        if len(policy) != len(grid):
            raise ValueError("policy and grid sizes differ")
        self.policy = policy
        self.grid = grid
        self.name = name
        self._actions = [Action(int(a)) for a in policy.actions]

    def __call__(self, b: float) -> Action:
        return self._actions[quantize(b, self.grid)]

    def tabulate(self, grid: BeliefGrid) -> Policy:
        if grid == self.grid:
            return self.policy
        return super().tabulate(grid)


class UniformRandomRule(PolicyRule):
    """Each action with probability 1/3, from a private seeded stream.

    Draws are taken in blocks for speed; the action sequence depends only on
    the seed.
    """

    name = "random"
    stochastic = True

    def __init__(self, seed: int | None = 0, block: int = 65536):
        self.seed = seed
        self.block = block
        self.reset()

    def reset(self) -> None:
        self._rng = np.random.default_rng(self.seed)
        self._buf: list[int] = []
        self._pos = 0

    def __call__(self, b: float = 0.5) -> Action:
        if self._pos >= len(self._buf):
            self._buf = self._rng.integers(3, size=self.block).tolist()
            self._pos = 0
        a = self._buf[self._pos]
        self._pos += 1
        return Action(a)

    def draw(self, size: int) -> np.ndarray:
        return np.array([int(self()) for _ in range(size)])

    @staticmethod
    def action_weights(n: int) -> np.ndarray:
        return np.full((3, n), 1.0 / 3.0)


def make_rule(name: str, config: ModelConfig, *, grid: BeliefGrid | None = None,
              policy: Policy | None = None, seed: int | None = 0) -> PolicyRule:
    """Rule addressed by one of :data:`POLICY_NAMES`."""
    if name == "map":
        return BeliefRule(map_policy, config, "map")
    if name == "greedy":
        return BeliefRule(expected_greedy_policy, config, "greedy")
    if name == "idle":
        return ConstantRule(Action.IDLE)
    if name == "random":
        return UniformRandomRule(seed)
    if name == "optimal":
        if policy is None or grid is None:
            raise ValueError("the optimal rule needs a solved grid policy")
        return GridRule(policy, grid, "optimal")
    raise ValueError(f"unknown policy {name!r}; expected one of {POLICY_NAMES}")
