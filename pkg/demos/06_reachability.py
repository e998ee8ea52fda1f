"""Check that the grid belief-MDP is communicating.

Under a rule that picks each command with probability 1/3, the belief
points reached from b=0 and b=1 should form one class. With a dead
channel no observation ever arrives and the endpoints never meet.
"""

from remotetrack import BeliefGrid
from remotetrack.experiments import SCENARIOS, check_communicating

grid = BeliefGrid(0.01)
for case, cfg in SCENARIOS.items():
    rep = check_communicating(cfg, grid)
    print(f"scenario {case}: {rep.reachable} reachable points, single class = {rep.single_class}")

dead = SCENARIOS["a"].replace(channel=(0.0, 0.0))
rep = check_communicating(dead, grid)
print(f"q = 0     : {rep.reachable} reachable points, single class = {rep.single_class}, "
      f"{len(rep.offending)} offending")
