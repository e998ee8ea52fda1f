"""Ground-truth Monte Carlo simulation of the tracking loop.

Slot ``t`` runs: source moves to ``X_t``; the sensor commanded at ``t-1``
(if any) samples ``X_t`` and transmits; the sink forms ``o_t``, updates the
belief, estimates ``X_t`` and picks the next command ``a_t``. Each slot
consumes exactly three uniforms in the order source, detection, channel.
"""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .model import Action, ModelConfig, Observation, SourceState, validate
from .policies import PolicyRule

DEFAULT_BURN_IN = 10_000
_BLOCK = 1 << 16


class TrajectoryRecord(NamedTuple):
    t: int
    true_state: SourceState
    action: Action  # command a_{t-1} that produced this slot's observation
    observation: Observation
    belief: float
    estimate: SourceState
    distortion: float
    transmit: bool  # a_t != IDLE


@dataclass(frozen=True)
class SimulationSummary:
    average_cost: float
    average_distortion: float
    transmission_rate: float
    slots: int
    seed: int | None
    policy: str = ""

    def to_json(self, path: str | Path | None = None) -> str:
        text = json.dumps(asdict(self), indent=2)
        if path is not None:
            Path(path).write_text(text + "\n")
        return text


def _advance(x: int, a: int, u_src: float, u_det: float, u_ch: float, config) -> tuple[int, Observation]:
    x = x if u_src < config.p else 3 - x
    if a == 0:
        return x, Observation.FR
    m = a - 1
    if u_ch >= config.channel[m]:
        return x, Observation.FR
    if u_det < config.detect[m][x - 1]:
        return x, (Observation.OBS1 if x == 1 else Observation.OBS2)
    return x, Observation.FD


def step(state: SourceState, pending_action: Action, config: ModelConfig,
         rng: np.random.Generator) -> tuple[SourceState, Observation]:
    """Advance the source one slot and produce the sink's observation."""
    u = rng.random(3)
    x, o = _advance(int(state), int(pending_action), u[0], u[1], u[2], config)
    return SourceState(x), o


def run(policy: PolicyRule, config: ModelConfig, horizon: int, seed: int | None = 0,
        burn_in: int = DEFAULT_BURN_IN, trajectory: list | None = None) -> SimulationSummary:
    """Simulate ``burn_in + horizon`` slots and average the last ``horizon``.

    Pass a list as ``trajectory`` to collect one :class:`TrajectoryRecord`
    per slot (burn-in included). The belief is kept continuous; grid rules
    quantize it only for their own lookup.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    config = validate(config)
    rng = np.random.default_rng(seed)
    policy.reset()
    d = config.distortion
    p = config.p
    # per-action (1 - p_{m,1}, 1 - p_{m,2}) for the failed-detection posterior
    miss = [None] + [(1.0 - config.detect[m][0], 1.0 - config.detect[m][1]) for m in range(2)]
    x = 1 if rng.random() < 0.5 else 2
    b = 0.5
    a = int(policy(b))
    total = burn_in + horizon
    dist_sum = 0.0
    tx = 0
    t = 0
    while t < total:
        block = rng.random((min(_BLOCK, total - t), 3)).tolist()
        for u_src, u_det, u_ch in block:
            t += 1
            x, o = _advance(x, a, u_src, u_det, u_ch, config)
            prev = a
            # same arithmetic as belief.update_belief, without enum dispatch
            prior = p * b + (1.0 - p) * (1.0 - b)
            if o is Observation.FR:
                b = prior
            elif o is Observation.OBS1:
                b = 1.0
            elif o is Observation.OBS2:
                b = 0.0
            else:
                m1, m2 = miss[a]
                num = m1 * prior
                b = min(1.0, max(0.0, num / (num + m2 * (1.0 - prior))))
            c1 = b * d[0][0] + (1 - b) * d[1][0]
            c2 = b * d[0][1] + (1 - b) * d[1][1]
            est = 1 if c1 <= c2 else 2
            dist = d[x - 1][est - 1]
            a = int(policy(b))
            if t > burn_in:
                dist_sum += dist
                tx += a != 0
            if trajectory is not None:
                trajectory.append(TrajectoryRecord(
                    t, SourceState(x), Action(prev), o, b, SourceState(est), dist, a != 0))
    avg_dist = dist_sum / horizon
    rate = tx / horizon
    return SimulationSummary(
        average_cost=avg_dist + config.alpha * rate,
        average_distortion=avg_dist,
        transmission_rate=rate,
        slots=horizon,
        seed=seed,
        policy=getattr(policy, "name", ""),
    )


def merge_summaries(summaries: list[SimulationSummary]) -> SimulationSummary:
    """Slot-weighted average of independent replications."""
    n = sum(s.slots for s in summaries)
    w = [s.slots / n for s in summaries]
    dist = sum(wi * s.average_distortion for wi, s in zip(w, summaries))
    cost = sum(wi * s.average_cost for wi, s in zip(w, summaries))
    rate = sum(wi * s.transmission_rate for wi, s in zip(w, summaries))
    return SimulationSummary(cost, dist, rate, n, None, summaries[0].policy)


def write_trajectory(records, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(TrajectoryRecord._fields)
        for r in records:
            w.writerow([r.t, int(r.true_state), int(r.action), r.observation.value,
                        repr(r.belief), int(r.estimate), repr(r.distortion), int(r.transmit)])
