"""Independent reference computations used only by the tests."""

from itertools import product

from remotetrack.model import Action, Observation


def joint_observation_table(b, a, config):
    """Enumerate (X_t, X_{t+1}, detection, delivery) and tabulate Pr(X_{t+1}, o).

    Shares no code with the package: the source chain, sensing and channel
    are spelled out event by event.
    """
    a = Action(a)
    table = {}
    p = config.p
    for x_now, x_next in product((1, 2), repeat=2):
        w = (b if x_now == 1 else 1 - b) * (p if x_next == x_now else 1 - p)
        if a is Action.IDLE:
            outcomes = [(Observation.FR, 1.0)]
        else:
            pd = config.detect[int(a) - 1][x_next - 1]
            q = config.channel[int(a) - 1]
            seen = Observation.OBS1 if x_next == 1 else Observation.OBS2
            outcomes = []
            for detected, delivered in product((True, False), repeat=2):
                pw = (pd if detected else 1 - pd) * (q if delivered else 1 - q)
                if not delivered:
                    o = Observation.FR
                elif detected:
                    o = seen
                else:
                    o = Observation.FD
                outcomes.append((o, pw))
        for o, pw in outcomes:
            table[(x_next, o)] = table.get((x_next, o), 0.0) + w * pw
    return table


def bayes_marginal(b, a, config):
    out = {}
    for (_, o), w in joint_observation_table(b, a, config).items():
        out[o] = out.get(o, 0.0) + w
    return out


def bayes_posterior(b, a, o, config):
    """Pr(X_{t+1} = 1 | o) by conditioning the joint table; None if Pr(o) = 0."""
    t = joint_observation_table(b, a, config)
    num = t.get((1, o), 0.0)
    den = num + t.get((2, o), 0.0)
    return None if den == 0 else num / den
