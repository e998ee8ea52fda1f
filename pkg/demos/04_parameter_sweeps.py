"""Sweep the source memory p, the transmission price alpha and the channel q.

Each point is a fresh solve plus exact evaluation of the three policies.
"""

from remotetrack.experiments import PRESETS, run_sweep

for name in ("p-sweep-unbalanced", "alpha-sweep", "q-sweep-alpha0.2"):
    spec = PRESETS[name]
    points, _ = run_sweep(spec)
    print(f"\n{name}")
    print(f"  {spec.sweep:>5s}  optimal    map   greedy")
    for pt in points:
        e = pt.evaluation.exact
        print(f"  {pt.value:5.2f}  {e['optimal']:.4f}  {e['map']:.4f}  {e['greedy']:.4f}")

# as alpha grows, commanding a sensor stops paying off and the cost saturates near 0.5
