"""Equal-precision construction that reaches the complete-information payoff.

Voters 1..q-2 always accept the main offer, voters q+1..N always reject it,
and voters q-1 and q vote their signals. Split votes leave the belief where
it was, so the same offer returns. Two rejections push the belief close to
zero, and the proposer then makes the safe offer accepted in both states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .core import ModelParams, Signal, State, reservation_policy, stage_utility, validate_params
from .engine import ContinuationCache, StrategyProfile, deviation_gain
from .errors import PreconditionError, RegimeError

EQUAL_TAU_TOL = 1e-12
POLICY_TOL = 1e-12


@dataclass
class PoolingSolution:
    tilde_p: float
    fallback_p: float
    belief: float
    low_belief: float
    continuation_values: Dict[Tuple[int, State], float]
    binding_constraint: str
    residuals: Dict[Tuple[int, str], float] = field(default_factory=dict)
    params: Optional[ModelParams] = field(default=None, repr=False)


def common_precision(params: ModelParams) -> float:
    taus = params.precisions
    if max(taus) - min(taus) >= EQUAL_TAU_TOL:
        raise PreconditionError("pooling construction needs equal signal precisions")
    return float(np.mean(taus))


def continuation_values(params: ModelParams, tilde_p: float, fallback_p: float,
                        mu: float, i: int) -> Tuple[float, float]:
    """(V_i^low, V_i^high): value of returning to the main offer next period.

    Closed form from the geometric number of split votes before either two
    acceptances (main offer passes) or two rejections (safe offer next).
    ``mu`` does not enter; it is kept for a uniform signature.
    """
    tau = common_precision(params)
    d = params.discount
    u = lambda x, st: stage_utility(params, i, x, st)
    den = 1.0 - 2.0 * (1.0 - tau) * tau * d
    v_l = ((1 - tau) ** 2 * u(tilde_p, State.LOW) + tau ** 2 * d * u(fallback_p, State.LOW)
           + tau * (2 - tau) * (1 - d) * u(0.0, State.LOW)) / den
    v_h = (tau ** 2 * u(tilde_p, State.HIGH) + (1 - tau) ** 2 * d * u(fallback_p, State.HIGH)
           + (1 - tau ** 2) * (1 - d) * u(0.0, State.HIGH)) / den
    return v_l, v_h


def double_rejection_belief(mu: float, tau: float) -> float:
    num = mu * (1 - tau) ** 2
    return num / (num + (1 - mu) * tau ** 2)


def deviation_residuals(params: ModelParams, p: float, fallback_p: float, mu: float, i: int,
                        v_low: Optional[Tuple[float, float]] = None) -> Tuple[float, float]:
    """Unnormalized gains for a pivotal voter from voting against her signal.

    First entry: low signal, accepting; second: high signal, rejecting.
    Both must be <= 0. ``v_low`` overrides the continuation after a double
    rejection (defaults to the safe offer accepted at once).
    """
    tau = common_precision(params)
    d = params.discount
    ml, mh = 1 - mu, mu
    vl, vh = continuation_values(params, p, fallback_p, mu, i)
    u = lambda x, st: stage_utility(params, i, x, st)
    wl, wh = v_low if v_low is not None else (u(fallback_p, State.LOW), u(fallback_p, State.HIGH))
    stay_l = (1 - d) * u(0.0, State.LOW) + d * vl
    stay_h = (1 - d) * u(0.0, State.HIGH) + d * vh
    low = (ml * tau ** 2 * (d * vl - d * wl) + ml * tau * (1 - tau) * (u(p, State.LOW) - stay_l)
           + mh * (1 - tau) ** 2 * (d * vh - d * wh) + mh * (1 - tau) * tau * (u(p, State.HIGH) - stay_h))
    # after a high signal the other pivotal voter is low with probability tau
    # in state low and 1 - tau in state high
    high = (ml * (1 - tau) * tau * (d * wl - d * vl) + ml * (1 - tau) ** 2 * (stay_l - u(p, State.LOW))
            + mh * tau * (1 - tau) * (d * wh - d * vh) + mh * tau ** 2 * (stay_h - u(p, State.HIGH)))
    return low, high


def _feasible(params, p, fallback_p, mu, tol=0.0) -> bool:
    q = params.quota
    return all(r <= tol for i in (q - 1, q) for r in deviation_residuals(params, p, fallback_p, mu, i))


def solve_tilde_p(params: ModelParams, mu: Optional[float] = None, grid: int = 4000,
                  tol: float = 1e-13) -> PoolingSolution:
    """Largest policy at which neither pivotal voter wants to vote against her signal.

    The continuation values depend on the candidate policy itself; they
    are closed-form in it, so each candidate is checked exactly. A grid scan
    locates the upper edge of the feasible set, which bisection refines.
    """
    validate_params(params)
    if params.quota < 2:
        raise PreconditionError("pooling construction needs q >= 2")
    tau = common_precision(params)
    mu = params.prior_high if mu is None else mu
    q = params.quota
    low_belief = double_rejection_belief(mu, tau)
    fallback = reservation_policy(params, q, Signal.L, low_belief)
    xs = np.linspace(0.0, params.policy_cap, grid + 1)
    ok = [_feasible(params, float(x), fallback, mu) for x in xs]
    if not any(ok):
        raise RegimeError("no policy satisfies both pivotal voters' conditions")
    top = max(k for k, f in enumerate(ok) if f)
    lo = float(xs[top])
    if top == grid:
        p = lo
    else:
        hi = float(xs[top + 1])
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if _feasible(params, mid, fallback, mu):
                lo = mid
            else:
                hi = mid
        p = lo
    cv, res = {}, {}
    for i in (q - 1, q):
        vl, vh = continuation_values(params, p, fallback, mu, i)
        cv[(i, State.LOW)], cv[(i, State.HIGH)] = vl, vh
        r_low, r_high = deviation_residuals(params, p, fallback, mu, i)
        res[(i, "low_signal")], res[(i, "high_signal")] = r_low, r_high
    binding = max(res, key=lambda k: res[k])[1]
    return PoolingSolution(p, fallback, mu, low_belief, cv, binding, res, params)


def build_pooling_profile(params: ModelParams, sol: PoolingSolution) -> StrategyProfile:
    """Profile that offers the main policy at the prior belief and the safe one below.

    Any belief at or above the midpoint (in log-odds) between the low
    posterior and the prior is treated as the main-offer region.
    """
    q = params.quota
    lo_odds = math.log(sol.low_belief / (1 - sol.low_belief))
    hi_odds = math.log(sol.belief / (1 - sol.belief))
    split = 0.5 * (lo_odds + hi_odds)

    def main_region(mu: float) -> bool:
        if mu <= 0.0:
            return False
        if mu >= 1.0:
            return True
        return math.log(mu / (1 - mu)) >= split

    def proposal(mu: float) -> float:
        if main_region(mu):
            return sol.tilde_p
        return reservation_policy(params, q, Signal.L, mu)

    def accept(j: int, s: Signal, mu: float, p: float) -> float:
        if main_region(mu) and abs(p - sol.tilde_p) <= POLICY_TOL:
            if j <= q - 2:
                return 1.0
            if j >= q + 1:
                return 0.0
            return 1.0 if s == Signal.H else 0.0
        return 1.0 if p <= reservation_policy(params, j, s, mu) + POLICY_TOL else 0.0

    return StrategyProfile(proposal, accept, name="pooling",
                           meta={"tilde_p": sol.tilde_p, "fallback_p": sol.fallback_p})


def on_path_nodes(params: ModelParams, sol: PoolingSolution) -> List[Tuple[float, float]]:
    """(belief, policy) pairs reached with positive probability."""
    return [(sol.belief, sol.tilde_p), (sol.low_belief, sol.fallback_p)]


def all_deviation_gains(params: ModelParams, profile: StrategyProfile,
                        nodes: List[Tuple[float, float]]) -> Dict[Tuple[float, int, Signal, int], float]:
    """Single-step deviation gain for every voter, signal and vote at each node."""
    cache = ContinuationCache(params, profile)
    out = {}
    for b, p in nodes:
        for j in params.voters:
            for s in (Signal.L, Signal.H):
                for a in (0, 1):
                    out[(b, j, s, a)] = deviation_gain(params, profile, j, s, b, a, p, cache)
    return out


__all__ = [
    "PoolingSolution", "continuation_values", "solve_tilde_p", "build_pooling_profile",
    "deviation_gain", "deviation_residuals", "on_path_nodes", "all_deviation_gains",
    "double_rejection_belief", "common_precision",
]
