"""Average-cost relative value iteration over the belief grid."""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .belief import ACTIONS, BeliefGrid, BeliefKernel, quantize
from .model import Action, ModelConfig, expected_stage_cost

logger = logging.getLogger(__name__)

DEFAULT_EPSILON = 1e-3
DEFAULT_MAX_ITERS = 100_000
# Q-values closer than this are treated as tied; the lower action index wins
TIE_TOL = 1e-10

PROVENANCES = ("optimal", "map", "expected-greedy", "always-idle", "uniform-random", "custom")


class NonConvergenceError(RuntimeError):
    def __init__(self, iterations: int, span: float):
        super().__init__(
            f"RVIA did not converge after {iterations} iterations (last span {span:.3g})"
        )
        self.iterations = iterations
        self.span = span


@dataclass(frozen=True)
class Policy:
    """One action per grid index."""

    actions: np.ndarray
    provenance: str = "custom"

    def __post_init__(self):
        acts = np.asarray(self.actions, dtype=int)
        if acts.ndim != 1 or not np.isin(acts, [0, 1, 2]).all():
            raise ValueError("policy actions must be a 1-D array over {0, 1, 2}")
        acts = acts.copy()
        acts.setflags(write=False)
        object.__setattr__(self, "actions", acts)
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")

    def __len__(self) -> int:
        return len(self.actions)

    def __getitem__(self, i: int) -> Action:
        return Action(int(self.actions[i]))

    @classmethod
    def constant(cls, n: int, action: Action, provenance: str = "custom") -> "Policy":
        return cls(np.full(n, int(action)), provenance)


@dataclass(frozen=True)
class SolveResult:
    lam: float
    h: np.ndarray
    policy: Policy
    iterations: int
    final_span: float
    grid: BeliefGrid
    q_values: np.ndarray = field(repr=False)
    spans: tuple[float, ...] = field(default=(), repr=False)
    reference_index: int = 0

    def to_json(self, path: str | Path | None = None) -> str:
        text = json.dumps(
            {
                "lambda": self.lam,
                "iterations": self.iterations,
                "final_span": self.final_span,
                "delta": self.grid.delta,
            },
            indent=2,
        )
        if path is not None:
            Path(path).write_text(text + "\n")
        return text

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["belief", "h", "action"])
            for b, hv, a in zip(self.grid.points, self.h, self.policy.actions):
                w.writerow([f"{b:.12g}", repr(float(hv)), int(a)])


def stage_costs(grid: BeliefGrid, config: ModelConfig) -> np.ndarray:
    """Array ``C[a, i]`` of expected one-slot cost at grid point ``i``."""
    return np.array(
        [[expected_stage_cost(b, a, config) for b in grid.points] for a in ACTIONS]
    )


def _as_matrix(kernel) -> np.ndarray:
    return kernel.matrix if isinstance(kernel, BeliefKernel) else np.asarray(kernel)


def greedy_actions(q_values: np.ndarray, tol: float = TIE_TOL) -> np.ndarray:
    """Lowest action index whose Q-value is within ``tol`` of the minimum."""
    best = q_values.min(axis=0)
    return np.argmax(q_values <= best + tol, axis=0)


def rvia(
    kernel,
    costs: np.ndarray,
    grid: BeliefGrid,
    epsilon: float = DEFAULT_EPSILON,
    max_iters: int = DEFAULT_MAX_ITERS,
    reference: float = 0.0,
) -> SolveResult:
    """Relative value iteration.

    Iterates ``V = min_a (C_a + P_a h)``, ``h = V - V[ref]`` from ``h = 0``
    until ``max |h_new - h_old| < epsilon``. The returned ``lam`` is
    ``V[ref]`` of the final sweep.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    P = _as_matrix(kernel)
    C = np.asarray(costs, dtype=float)
    if not np.all(np.isfinite(C)):
        raise ValueError("stage costs must be finite")
    ref = quantize(reference, grid)
    h = np.zeros(P.shape[1])
    spans = []
    for n in range(1, max_iters + 1):
        q = C + P @ h
        v = q.min(axis=0)
        h_new = v - v[ref]
        span = float(np.max(np.abs(h_new - h)))
        spans.append(span)
        h = h_new
        if span < epsilon:
            break
    else:
        raise NonConvergenceError(max_iters, spans[-1])
    q = C + P @ h
    logger.debug("rvia converged in %d iterations, lambda=%.6f", n, v[ref])
    return SolveResult(
        lam=float(v[ref]),
        h=h,
        policy=Policy(greedy_actions(q), "optimal"),
        iterations=n,
        final_span=span,
        grid=grid,
        q_values=q,
        spans=tuple(spans),
        reference_index=ref,
    )


def solve(config: ModelConfig, delta: float = 0.01, epsilon: float = DEFAULT_EPSILON,
          max_iters: int = DEFAULT_MAX_ITERS, kernel: BeliefKernel | None = None) -> SolveResult:
    """Build the grid and kernel for ``config`` and run :func:`rvia`."""
    from .belief import build_kernel

    if kernel is None:
        kernel = build_kernel(BeliefGrid(delta), config)
    return rvia(kernel, stage_costs(kernel.grid, config), kernel.grid, epsilon, max_iters)


def induced_chain(policy, kernel) -> np.ndarray:
    """Transition matrix of the belief chain under ``policy``.

    ``policy`` is a :class:`Policy` or an ``(3, n)`` array of action
    probabilities per grid point (randomized rules).
    """
    P = _as_matrix(kernel)
    n = P.shape[1]
    if isinstance(policy, Policy):
        return P[policy.actions, np.arange(n)]
    w = np.asarray(policy, dtype=float)
    return np.einsum("ai,aij->ij", w, P)


def stationary_distribution(chain: np.ndarray, start: int, tol: float = 1e-12,
                            max_doublings: int = 64) -> np.ndarray:
    """Limiting distribution of ``chain`` started at ``start``.

    Iterates the lazy chain ``(I + M) / 2`` (same invariant measures, no
    periodicity) by repeated squaring until successive iterates agree in L1
    within ``tol``.
    """
    n = chain.shape[0]
    power = 0.5 * (np.eye(n) + chain)
    mu = power[start].copy()
    for _ in range(max_doublings):
        power = power @ power
        nxt = power[start]
        if np.abs(nxt - mu).sum() < tol:
            return nxt.copy()
        mu = nxt.copy()
    return mu


def evaluate_policy(policy, kernel, costs: np.ndarray, start: float = 0.5) -> float:
    """Exact long-run average cost of a fixed policy on the belief grid.

    For chains with several recurrent classes this is the cost of the class
    (mixture) reached from the grid point nearest ``start``.
    """
    P = _as_matrix(kernel)
    n = P.shape[1]
    C = np.asarray(costs, dtype=float)
    M = induced_chain(policy, P)
    if isinstance(policy, Policy):
        c = C[policy.actions, np.arange(n)]
    else:
        c = (np.asarray(policy, dtype=float) * C).sum(axis=0)
    if isinstance(kernel, BeliefKernel):
        s = quantize(start, kernel.grid)
    else:
        s = int(round(start * (n - 1)))
    mu = stationary_distribution(M, s)
    return float(mu @ c)
