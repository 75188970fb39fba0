"""Independent reference computations used by the tests.

Each oracle avoids the code path it checks: pmfs come from polynomial
products, belief updates from summing over every private signal profile,
reservation policies from bisection on the expected-utility difference.
"""

import itertools

import numpy as np

from agenda_game.core import Signal, State, expected_utility


def pmf_polynomial(z):
    """Coefficients of prod_k ((1 - z_k) + z_k x), lowest degree first."""
    poly = np.array([1.0])
    for p in z:
        poly = np.convolve(poly, [1.0 - p, p])
    return poly


def pmf_subsets(z, r):
    """Sum over all size-r subsets of accepting voters."""
    z = list(z)
    n = len(z)
    total = 0.0
    for chosen in itertools.combinations(range(n), r):
        term = 1.0
        for k in range(n):
            term *= z[k] if k in chosen else 1.0 - z[k]
        total += term
    return total


def posterior_by_signal_profiles(params, profile, mu, p, votes):
    """P(high | votes) summing over states and all 2^N private signal profiles."""
    weight = {}
    for st in (State.LOW, State.HIGH):
        prior = mu if st == State.HIGH else 1.0 - mu
        acc = 0.0
        for sigs in itertools.product((Signal.L, Signal.H), repeat=params.n_voters):
            pr = prior
            for i, (s, a) in enumerate(zip(sigs, votes), 1):
                tau = params.tau(i)
                pr *= tau if (s == Signal.H) == (st == State.HIGH) else 1.0 - tau
                alpha = profile.accept(i, s, mu, p)
                pr *= alpha if a else 1.0 - alpha
            acc += pr
        weight[st] = acc
    total = weight[State.LOW] + weight[State.HIGH]
    if total < 1e-30:
        return mu
    return weight[State.HIGH] / total


def reservation_by_bisection(params, i, signal, mu, iters=200):
    """Largest x in [0, M] with E[u_i(x)] >= E[u_i(0)] under the signal posterior."""
    tau = params.tau(i)
    like = tau if signal == Signal.H else 1.0 - tau
    post = mu * like / (mu * like + (1.0 - mu) * (1.0 - like)) if mu * like > 0 else 0.0
    base = expected_utility(params, i, 0.0, post)

    def ok(x):
        return expected_utility(params, i, x, post) >= base - 1e-15

    if ok(params.policy_cap):
        return params.policy_cap
    # expected utility is concave with its peak at half the answer
    lo = 0.5 * (post * params.y(i, State.HIGH) + (1 - post) * params.y(i, State.LOW))
    hi = params.policy_cap
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo


def enumerate_paths(params, profile, mu, state, periods):
    """Distribution over (period, policy) by explicit recursion over vote records.

    No belief merging, so it only scales to a few periods.
    """
    out = {}

    def rec(t, b, mass):
        if t > periods or mass == 0.0:
            return
        for p, w in profile.proposals(b):
            for votes in itertools.product((0, 1), repeat=params.n_voters):
                pr = mass * w
                for i, a in enumerate(votes, 1):
                    tau = params.tau(i)
                    a_h = profile.accept(i, Signal.H, b, p)
                    a_l = profile.accept(i, Signal.L, b, p)
                    if state == State.HIGH:
                        alpha = tau * a_h + (1 - tau) * a_l
                    else:
                        alpha = (1 - tau) * a_h + tau * a_l
                    pr *= alpha if a else 1.0 - alpha
                if pr == 0.0:
                    continue
                if sum(votes) >= params.quota:
                    out[(t, p)] = out.get((t, p), 0.0) + pr
                else:
                    b2 = posterior_by_signal_profiles(params, profile, b, p, votes)
                    rec(t + 1, b2, pr)

    rec(1, mu, 1.0)
    return out
