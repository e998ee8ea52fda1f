"""Command-line front end (``python -m remotetrack``)."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import experiments as ex
from .belief import BeliefGrid, build_kernel
from .model import load_config
from .policies import POLICY_NAMES, make_rule
from .simulator import DEFAULT_BURN_IN, run, write_trajectory
from .solver import DEFAULT_EPSILON, rvia, stage_costs

OUT_ENV = "REMOTETRACK_OUT"


def _out_path(args, default_name: str) -> Path | None:
    if args.out == "-":
        return None
    if args.out:
        return Path(args.out)
    base = os.environ.get(OUT_ENV)
    if base:
        Path(base).mkdir(parents=True, exist_ok=True)
        return Path(base) / default_name
    return None


def _emit(text: str, path: Path | None) -> None:
    if path is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        path.write_text(text if text.endswith("\n") else text + "\n")
        print(f"wrote {path}", file=sys.stderr)


def _spec(args) -> ex.ScenarioSpec:
    if args.config:
        spec = ex.ScenarioSpec(Path(args.config).stem, load_config(args.config))
        if args.scenario and args.scenario in ex.PRESETS:
            base = ex.PRESETS[args.scenario]
            spec = ex.ScenarioSpec(spec.name, spec.config, sweep=base.sweep, values=base.values)
    else:
        name = args.scenario or "a"
        if name not in ex.PRESETS:
            raise SystemExit(f"unknown scenario {name!r}; choose from {sorted(ex.PRESETS)}")
        spec = ex.PRESETS[name]
    return ex.ScenarioSpec(spec.name, spec.config, delta=args.delta, epsilon=args.epsilon,
                           horizon=args.horizon, seeds=tuple(args.seed), sweep=spec.sweep,
                           values=spec.values)


def cmd_solve(args) -> None:
    spec = _spec(args)
    grid = BeliefGrid(spec.delta)
    sol = rvia(build_kernel(grid, spec.config), stage_costs(grid, spec.config), grid, spec.epsilon)
    path = _out_path(args, f"solve_{spec.name}.csv")
    if path is None:
        _emit(sol.to_json(), None)
    else:
        sol.to_csv(path)
        sol.to_json(path.with_suffix(".json"))
        print(f"wrote {path} and {path.with_suffix('.json')}", file=sys.stderr)


def cmd_simulate(args) -> None:
    spec = _spec(args)
    grid = BeliefGrid(spec.delta)
    policy = None
    if args.policy == "optimal":
        policy = rvia(build_kernel(grid, spec.config), stage_costs(grid, spec.config),
                      grid, spec.epsilon).policy
    seed = spec.seeds[0]
    rule = make_rule(args.policy, spec.config, grid=grid, policy=policy, seed=seed)
    traj = [] if args.trajectory else None
    summary = run(rule, spec.config, spec.horizon, seed=seed, burn_in=args.burn_in, trajectory=traj)
    if traj is not None:
        write_trajectory(traj, args.trajectory)
    _emit(summary.to_json(), _out_path(args, f"simulate_{spec.name}_{args.policy}.json"))


def cmd_table1(args) -> None:
    _, text = ex.run_table1(args.delta, args.epsilon, args.horizon, tuple(args.seed), args.burn_in)
    _emit(text, _out_path(args, "table1.csv"))


def cmd_sweep(args) -> None:
    spec = _spec(args)
    if spec.sweep is None:
        raise SystemExit(f"scenario {spec.name!r} has no sweep; pick a *-sweep-* preset")
    if args.values:
        spec = ex.ScenarioSpec(spec.name, spec.config, spec.delta, spec.epsilon, spec.horizon,
                               spec.seeds, spec.sweep, tuple(args.values))
    _, text = ex.run_sweep(spec, burn_in=args.burn_in)
    _emit(text, _out_path(args, f"sweep_{spec.name}.csv"))


def cmd_policy_map(args) -> None:
    spec = _spec(args)
    _, text = ex.policy_map(spec, args.values or None)
    _emit(text, _out_path(args, f"policy_map_{spec.name}.csv"))


def cmd_check(args) -> None:
    spec = _spec(args)
    report = ex.check_communicating(spec.config, BeliefGrid(spec.delta))
    _emit(json.dumps(report.to_dict(), indent=2), _out_path(args, f"communicating_{spec.name}.json"))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON model config (keys p, detect, channel, alpha, distortion)")
    common.add_argument("--scenario", help=f"preset name: {', '.join(ex.PRESETS)}")
    common.add_argument("--delta", type=float, default=0.01, help="belief grid resolution")
    common.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON, help="RVIA stopping span")
    common.add_argument("--horizon", type=int, default=1_000_000, help="simulated slots (0: exact only)")
    common.add_argument("--seed", type=int, nargs="+", default=[0], help="seed(s); one replication each")
    common.add_argument("--burn-in", type=int, default=DEFAULT_BURN_IN)
    common.add_argument("--out", help=f"output file ('-' for stdout); default under ${OUT_ENV} or stdout")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="remotetrack", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common], help="solve one config by RVIA").set_defaults(fn=cmd_solve)
    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo run of one policy")
    p.add_argument("--policy", choices=POLICY_NAMES, default="optimal")
    p.add_argument("--trajectory", help="also dump the per-slot trajectory CSV here")
    p.set_defaults(fn=cmd_simulate)
    sub.add_parser("table1", parents=[common], help="compare policies on scenarios a-d").set_defaults(fn=cmd_table1)
    p = sub.add_parser("sweep", parents=[common], help="parameter sweep of a preset")
    p.add_argument("--values", type=float, nargs="+", help="override the preset sweep values")
    p.set_defaults(fn=cmd_sweep)
    p = sub.add_parser("policy-map", parents=[common], help="optimal action per (p, belief)")
    p.add_argument("--values", type=float, nargs="+", help="p values")
    p.set_defaults(fn=cmd_policy_map)
    sub.add_parser("check-communicating", parents=[common],
                   help="reachability under the randomized rule").set_defaults(fn=cmd_check)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    args.fn(args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
