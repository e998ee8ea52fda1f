"""Solve the discretized belief-MDP for one scenario and look at the result.

The sink keeps one number, the probability ``b`` that the source is in
STATE1. After quantizing ``b`` to a 0.01 grid, relative value iteration
returns the optimal average cost ``lambda``, the relative values ``h`` and
a command per grid point.
"""

from remotetrack import Action, solve
from remotetrack.experiments import SCENARIOS

cfg = SCENARIOS["a"]
print("config:", cfg.to_dict())

sol = solve(cfg, delta=0.01, epsilon=1e-3)
print(f"lambda = {sol.lam:.5f} after {sol.iterations} iterations (span {sol.final_span:.2e})")

# away from b = 0.5 the rule commands the sensor that detects the less likely state:
# a failed detection from it is itself a strong hint. Near 0.5 the two sensors are almost tied.
runs = []
for b, a in zip(sol.grid.points, sol.policy.actions):
    name = Action(int(a)).name
    if not runs or runs[-1][0] != name:
        runs.append([name, b, b])
    runs[-1][2] = b
for name, lo, hi in runs:
    print(f"  b in [{lo:.2f}, {hi:.2f}]: {name}")
