"""Draw the optimal command as a function of (p, b) for the symmetric sensors.

Each row is one value of p; each column a belief in steps of 0.05.
``.`` idle, ``1`` sensor 1, ``2`` sensor 2.
"""

from remotetrack.experiments import PRESETS, policy_map

glyph = {0: ".", 1: "1", 2: "2"}
for name in ("symmetric-alpha0.2", "symmetric-alpha0.5"):
    sols, _ = policy_map(PRESETS[name])
    print(f"\n{name}   b = 0 ... 1")
    for p, sol in sols.items():
        print(f"  p={p:.2f}  " + "".join(glyph[int(a)] for a in sol.policy.actions[::5]))
