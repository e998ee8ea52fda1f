"""Scenario presets, parameter sweeps, Table-I style comparisons and reachability."""

from __future__ import annotations

import csv
import io
import logging
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .belief import BeliefGrid, BeliefKernel, build_kernel, quantize
from .model import D1, D2, ModelConfig, ValidatedModel, validate
from .policies import UniformRandomRule, make_rule
from .simulator import DEFAULT_BURN_IN, merge_summaries, run
from .solver import (
    DEFAULT_EPSILON,
    NonConvergenceError,
    SolveResult,
    evaluate_policy,
    induced_chain,
    rvia,
    stage_costs,
)

logger = logging.getLogger(__name__)

SWEEP_PARAMETERS = ("p", "alpha", "q", "delta")
COMPARED = ("optimal", "map", "greedy")


def _cfg(detect, *, p=0.7, q=0.8, alpha=0.2, distortion=D1) -> ValidatedModel:
    return validate(ModelConfig(p=p, detect=detect, channel=(q, q), alpha=alpha,
                                distortion=distortion))


SCENARIOS = {
    "a": _cfg(((0.9, 0.1), (0.1, 0.9))),  # small overlap
    "b": _cfg(((0.8, 0.2), (0.2, 0.8))),  # large overlap
    "c": _cfg(((0.7, 0.7), (0.2, 0.2))),  # both cover everything, weakly
    "d": _cfg(((0.8, 0.2), (0.8, 0.2))),  # both favour state 1
}

UNBALANCED = ((0.6, 0.8), (0.7, 0.5))
BALANCED = ((0.5, 0.8), (0.8, 0.5))
SYMMETRIC = ((0.6, 0.7), (0.7, 0.6))

P_VALUES = tuple(round(float(v), 2) for v in np.arange(0.05, 0.951, 0.05))
ALPHA_VALUES = tuple(round(float(v), 2) for v in np.arange(0.0, 1.001, 0.1))
# q = 0 leaves the grid chain multichain (no observation ever arrives), so RVIA has no constant gain
Q_VALUES = tuple(round(float(v), 2) for v in np.arange(0.1, 1.001, 0.1))


@dataclass(frozen=True)
class ScenarioSpec:
    name: str
    config: ValidatedModel
    delta: float = 0.01
    epsilon: float = DEFAULT_EPSILON
    horizon: int = 0  # 0 disables simulation
    seeds: tuple[int, ...] = (0,)
    sweep: str | None = None
    values: tuple[float, ...] = ()

    def __post_init__(self):
        if self.sweep is not None and self.sweep not in SWEEP_PARAMETERS:
            raise ValueError(f"sweep parameter must be one of {SWEEP_PARAMETERS}")
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))

    def at(self, value: float) -> tuple[ValidatedModel, float]:
        """Config and grid resolution at one sweep point."""
        if self.sweep == "p":
            return self.config.replace(p=value), self.delta
        if self.sweep == "alpha":
            return self.config.replace(alpha=value), self.delta
        if self.sweep == "q":
            return self.config.replace(channel=(value, value)), self.delta
        if self.sweep == "delta":
            return self.config, value
        return self.config, self.delta


PRESETS: dict[str, ScenarioSpec] = {
    **{k: ScenarioSpec(k, c) for k, c in SCENARIOS.items()},
    "p-sweep-unbalanced": ScenarioSpec(
        "p-sweep-unbalanced", _cfg(UNBALANCED, alpha=0.4, distortion=D2), sweep="p", values=P_VALUES),
    "p-sweep-balanced": ScenarioSpec(
        "p-sweep-balanced", _cfg(BALANCED, alpha=0.4, distortion=D2), sweep="p", values=P_VALUES),
    "alpha-sweep": ScenarioSpec(
        "alpha-sweep", _cfg(UNBALANCED, p=0.8, distortion=D2), sweep="alpha", values=ALPHA_VALUES),
    "q-sweep-alpha0.5": ScenarioSpec(
        "q-sweep-alpha0.5", _cfg(UNBALANCED, p=0.8, alpha=0.5, distortion=D2), sweep="q", values=Q_VALUES),
    "q-sweep-alpha0.2": ScenarioSpec(
        "q-sweep-alpha0.2", _cfg(UNBALANCED, p=0.8, alpha=0.2, distortion=D2), sweep="q", values=Q_VALUES),
    "symmetric-alpha0.2": ScenarioSpec(
        "symmetric-alpha0.2", _cfg(SYMMETRIC, alpha=0.2), sweep="p", values=P_VALUES),
    "symmetric-alpha0.5": ScenarioSpec(
        "symmetric-alpha0.5", _cfg(SYMMETRIC, alpha=0.5), sweep="p", values=P_VALUES),
}


@dataclass
class Evaluation:
    """Solver output plus exact and (optionally) simulated costs per policy."""

    config: ValidatedModel
    kernel: BeliefKernel
    solution: SolveResult
    exact: dict[str, float]
    simulated: dict[str, float] = field(default_factory=dict)


def compare_policies(config: ModelConfig, delta: float = 0.01, epsilon: float = DEFAULT_EPSILON,
                     horizon: int = 0, seeds: Sequence[int] = (0,),
                     burn_in: int = DEFAULT_BURN_IN, policies: Sequence[str] = COMPARED) -> Evaluation:
    config = validate(config)
    grid = BeliefGrid(delta)
    kernel = build_kernel(grid, config)
    costs = stage_costs(grid, config)
    sol = rvia(kernel, costs, grid, epsilon)
    ev = Evaluation(config, kernel, sol, {})
    for name in policies:
        rule = make_rule(name, config, grid=grid, policy=sol.policy)
        if rule.stochastic:
            ev.exact[name] = evaluate_policy(UniformRandomRule.action_weights(len(grid)), kernel, costs)
        else:
            ev.exact[name] = evaluate_policy(rule.tabulate(grid), kernel, costs)
        if horizon:
            reps = [run(make_rule(name, config, grid=grid, policy=sol.policy, seed=s),
                        config, horizon, seed=s, burn_in=burn_in) for s in seeds]
            ev.simulated[name] = merge_summaries(reps).average_cost
    return ev


def _write_rows(header, rows, out) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    text = buf.getvalue()
    if out is not None:
        Path(out).write_text(text)
    return text


def _fmt(v) -> str:
    return "" if v is None else f"{v:.6f}"


def run_table1(delta: float = 0.01, epsilon: float = DEFAULT_EPSILON, horizon: int = 1_000_000,
               seeds: Sequence[int] = (0,), burn_in: int = DEFAULT_BURN_IN,
               out: str | Path | None = None) -> tuple[dict[str, Evaluation], str]:
    """Average cost of the RVIA, MAP and expected-greedy policies on scenarios a-d."""
    results = {}
    rows = []
    for name, config in SCENARIOS.items():
        ev = compare_policies(config, delta, epsilon, horizon, seeds, burn_in)
        results[name] = ev
        rows.append([name, _fmt(ev.solution.lam)]
                    + [_fmt(ev.exact[p]) for p in COMPARED]
                    + [_fmt(ev.simulated.get(p)) for p in COMPARED])
    header = ["case", "lambda", "proposed_exact", "map_exact", "greedy_exact",
              "proposed_sim", "map_sim", "greedy_sim"]
    return results, _write_rows(header, rows, out)


@dataclass
class SweepPoint:
    value: float
    evaluation: Evaluation | None
    error: str = ""


def run_sweep(spec: ScenarioSpec, burn_in: int = DEFAULT_BURN_IN,
              out: str | Path | None = None) -> tuple[list[SweepPoint], str]:
    """One solve plus exact (and optional simulated) evaluations per sweep value.

    A failing point is recorded with its error message and the sweep goes on.
    """
    if spec.sweep is None:
        raise ValueError(f"scenario {spec.name!r} has no sweep descriptor")
    points = []
    rows = []
    for value in spec.values:
        config, delta = spec.at(value)
        try:
            ev = compare_policies(config, delta, spec.epsilon, spec.horizon, spec.seeds, burn_in)
        except (NonConvergenceError, ValueError) as exc:
            logger.warning("sweep %s=%s failed: %s", spec.sweep, value, exc)
            points.append(SweepPoint(value, None, str(exc)))
            rows.append([value, "", "", "", "", "", "", "", str(exc)])
            continue
        points.append(SweepPoint(value, ev))
        rows.append([value, _fmt(ev.solution.lam)]
                    + [_fmt(ev.exact[p]) for p in COMPARED]
                    + [_fmt(ev.simulated.get(p)) for p in COMPARED] + [""])
    header = [spec.sweep, "lambda", "proposed_exact", "map_exact", "greedy_exact",
              "proposed_sim", "map_sim", "greedy_sim", "error"]
    return points, _write_rows(header, rows, out)


def export_policy_structure(solutions: dict[float, SolveResult],
                            out: str | Path | None = None) -> str:
    """``(p, belief, action)`` rows for a family of solutions keyed by ``p``."""
    rows = []
    for p in sorted(solutions):
        sol = solutions[p]
        rows.extend([p, f"{b:.12g}", int(a)] for b, a in zip(sol.grid.points, sol.policy.actions))
    return _write_rows(["p", "belief", "action"], rows, out)


def policy_map(spec: ScenarioSpec, p_values: Sequence[float] | None = None,
               out: str | Path | None = None) -> tuple[dict[float, SolveResult], str]:
    p_values = spec.values if p_values is None and spec.sweep == "p" else (p_values or P_VALUES)
    grid = BeliefGrid(spec.delta)
    sols = {}
    for p in p_values:
        config = spec.config.replace(p=p)
        sols[p] = rvia(build_kernel(grid, config), stage_costs(grid, config), grid, spec.epsilon)
    return sols, export_policy_structure(sols, out)


@dataclass(frozen=True)
class ReachabilityReport:
    reachable: int
    single_class: bool
    offending: tuple[int, ...]
    reachable_set: tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {"reachable": self.reachable, "single_class": self.single_class,
                "offending": list(self.offending)}


def _closure(adj: list[list[int]], sources) -> set[int]:
    seen = set(sources)
    todo = deque(seen)
    while todo:
        u = todo.popleft()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                todo.append(v)
    return seen


def check_communicating(config: ModelConfig, grid: BeliefGrid) -> ReachabilityReport:
    """Reachability of the grid chain under the uniformly randomized command rule.

    Passes when the set reached from the ``b=0`` and ``b=1`` points is one
    strongly connected class containing both; ``offending`` lists reached
    states that cannot get back to either endpoint.
    """
    kernel = build_kernel(grid, config)
    chain = induced_chain(UniformRandomRule.action_weights(len(grid)), kernel)
    n = len(grid)
    fwd = [np.flatnonzero(chain[i] > 0).tolist() for i in range(n)]
    rev = [[] for _ in range(n)]
    for i, js in enumerate(fwd):
        for j in js:
            rev[j].append(i)
    lo, hi = quantize(0.0, grid), quantize(1.0, grid)
    reach = _closure(fwd, (lo, hi))
    back = _closure(rev, (lo,)) & _closure(rev, (hi,))
    offending = tuple(sorted(reach - back))
    return ReachabilityReport(len(reach), not offending, offending, tuple(sorted(reach)))
