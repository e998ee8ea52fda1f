"""Check the solver against a ground-truth simulation of the tracking loop.

The simulator draws the hidden source, the sensor detection and the
channel loss slot by slot, runs the sink's Bayes filter on a continuous
belief and charges distortion plus ``alpha`` per transmission.
"""

from remotetrack import BeliefGrid, solve, run, make_rule
from remotetrack.experiments import SCENARIOS

cfg = SCENARIOS["b"]
sol = solve(cfg)
rule = make_rule("optimal", cfg, grid=BeliefGrid(0.01), policy=sol.policy)

for horizon in (10_000, 100_000, 1_000_000):
    s = run(rule, cfg, horizon, seed=1)
    print(f"horizon {horizon:>9,d}: cost {s.average_cost:.4f} "
          f"(distortion {s.average_distortion:.4f}, tx rate {s.transmission_rate:.3f})")
print(f"solver lambda      : {sol.lam:.4f}")

# a few slots of the trajectory
traj = []
run(rule, cfg, 8, seed=1, burn_in=0, trajectory=traj)
for r in traj:
    print(f"  t={r.t} X={int(r.true_state)} a_prev={r.action.name:7s} o={r.observation.value:2s} "
          f"b={r.belief:.3f} est={int(r.estimate)}")
