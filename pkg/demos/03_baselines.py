"""Compare the optimal policy with the MAP and expected-greedy baselines.

Exact costs come from the stationary distribution of each policy's grid
chain; the simulated ones from 200k slots of the Monte Carlo loop.
"""

from remotetrack.experiments import SCENARIOS, compare_policies

print("case  policy     exact    simulated")
for case, cfg in SCENARIOS.items():
    ev = compare_policies(cfg, horizon=200_000, seeds=(0,),
                          policies=("optimal", "map", "greedy", "idle", "random"))
    for pol, exact in ev.exact.items():
        print(f"  {case}   {pol:8s}  {exact:.4f}   {ev.simulated[pol]:.4f}")
