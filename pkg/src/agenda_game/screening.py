"""Screening equilibrium with a single informed voter.

Voter ``i <= q`` votes on her signal; everyone else uses belief-dependent
cutoffs that make her pivotal. The proposer walks down a finite ladder of
offers p_T > ... > p_1 while rejections push the public belief down through
cutoffs M_{T-1}, ..., M_1. At M_1 and below the proposer stops screening and
offers the decisive voter's low-signal reservation policy.

All quantities are computed at the given (delta, tau); nothing is replaced
by its limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .beliefs import signal_posterior
from .core import ModelParams, Signal, State, reservation_policy, stage_utility, validate_params
from .engine import StrategyProfile
from .errors import ConvergenceError, PreconditionError, RegimeError

BELIEF_TOL = 1e-12
POLICY_TOL = 1e-12
MAX_STEPS = 400


def acceptance_prob(mu: float, m_prev: float, tau: float) -> float:
    """Mixing probability phi so that a rejection moves the belief from mu to m_prev.

    Solves m_prev = mu(1 - tau phi) / [mu(1 - tau phi) + (1 - mu)(1 - (1 - tau) phi)].
    """
    if not m_prev < mu:
        raise PreconditionError(f"target belief {m_prev} must lie below {mu}")
    den = mu * tau * (1.0 - m_prev) - m_prev * (1.0 - mu) * (1.0 - tau)
    phi = (mu - m_prev) / den if den > 0 else math.inf
    if not (0.0 < phi <= 1.0 + 1e-12):
        raise RegimeError(f"no mixing probability in (0, 1] reaches {m_prev} from {mu} (phi={phi})")
    return min(phi, 1.0)


def theorem2_value(params: ModelParams, i: int, mu: float) -> float:
    """Limit proposer payoff with one asymptotically more precise voter i <= q."""
    q = params.quota
    if not (1 <= i <= q):
        raise PreconditionError("informed voter must be among the first q")
    y_lo, y_hi = params.y(q, State.LOW), params.y(q, State.HIGH)
    top = max(y_lo, min(y_hi, params.y(i, State.HIGH) - y_lo))
    return mu * top + (1.0 - mu) * y_lo


def _largest_root(params: ModelParams, i: int, post_high: float, target: float) -> Optional[float]:
    """max{p in [0, M] : E[u_i(p)] >= target}, or None when the set is empty."""
    half_h, half_l = 0.5 * params.y(i, State.HIGH), 0.5 * params.y(i, State.LOW)
    mean = post_high * half_h + (1 - post_high) * half_l
    var = post_high * (1 - post_high) * (half_h - half_l) ** 2
    slack = -target - var
    if slack < -1e-14:
        return None
    return min(mean + math.sqrt(max(slack, 0.0)), params.policy_cap)


@dataclass
class _Anchor:
    belief: float
    policy: float
    phi: float
    proposer: Dict[State, float]
    voter: Dict[State, float]


@dataclass
class ScreeningPath:
    params: ModelParams
    informed_voter: int
    prior: float
    cutoffs: List[float]
    policies: List[float]
    phis: List[float]
    beliefs: List[float]
    anchors: List[_Anchor] = field(repr=False, default_factory=list)

    @property
    def steps(self) -> int:
        return len(self.policies)

    def interval(self, mu: float) -> int:
        """Index t with mu in (M_{t-1}, M_t]; beliefs above the top cutoff map to T."""
        for t, m in enumerate(self.cutoffs, 1):
            if mu <= m + BELIEF_TOL:
                return t
        return len(self.cutoffs)

    def safe_policy(self, mu: float) -> float:
        return reservation_policy(self.params, self.params.quota, Signal.L, mu)

    def offer(self, t: int, mu: float) -> float:
        """Policy p_t at belief mu: the informed H voter is indifferent to waiting."""
        if t == 1:
            return self.safe_policy(mu)
        return _offer(self.params, self.informed_voter, self.anchors[t - 2], mu)

    def phi(self, t: int, mu: float) -> float:
        if t == 1:
            return 1.0
        target = self.cutoffs[t - 2]
        if mu <= target + BELIEF_TOL:
            return 0.0
        try:
            return acceptance_prob(mu, target, self.params.tau(self.informed_voter))
        except RegimeError:
            return 1.0

    def proposal(self, mu: float) -> float:
        return self.offer(self.interval(mu), mu)


def _continuation(params: ModelParams, anchor: _Anchor, who_values: str, post_high: float) -> float:
    vals = getattr(anchor, who_values)
    return post_high * vals[State.HIGH] + (1 - post_high) * vals[State.LOW]


def _offer(params: ModelParams, i: int, prev: _Anchor, mu: float) -> float:
    delta = params.discount
    post = signal_posterior(mu, Signal.H, params.tau(i))
    u0 = post * stage_utility(params, i, 0.0, State.HIGH) + (1 - post) * stage_utility(params, i, 0.0, State.LOW)
    target = (1 - delta) * u0 + delta * _continuation(params, prev, "voter", post)
    p = _largest_root(params, i, post, target)
    if p is None:
        raise RegimeError(f"no policy satisfies the informed voter's indifference at belief {mu}")
    return p


def _screen_value(params: ModelParams, i: int, prev: _Anchor, mu: float) -> Tuple[float, float, float, Dict, Dict]:
    """Offer, mixing probability and state values when screening from mu down to prev."""
    tau, delta = params.tau(i), params.discount
    p = _offer(params, i, prev, mu)
    phi = acceptance_prob(mu, prev.belief, tau)
    a = {State.HIGH: tau * phi, State.LOW: (1 - tau) * phi}
    prop, vot = {}, {}
    for st in (State.LOW, State.HIGH):
        prop[st] = a[st] * p + (1 - a[st]) * delta * prev.proposer[st]
        vot[st] = (a[st] * stage_utility(params, i, p, st)
                   + (1 - a[st]) * ((1 - delta) * stage_utility(params, i, 0.0, st) + delta * prev.voter[st]))
    return p, phi, mu * prop[State.HIGH] + (1 - mu) * prop[State.LOW], prop, vot


def _safe_anchor(params: ModelParams, i: int, mu: float) -> _Anchor:
    p = reservation_policy(params, params.quota, Signal.L, mu)
    return _Anchor(mu, p, 1.0,
                   {st: p for st in (State.LOW, State.HIGH)},
                   {st: stage_utility(params, i, p, st) for st in (State.LOW, State.HIGH)})


def _first_cutoff(params: ModelParams, i: int, tol: float) -> float:
    """Largest belief at which the safe offer beats a fully separating one.

    The separating offer is rejected only by low-signal voters; the
    proposer then makes the safe offer at the resulting posterior.
    """
    tau = params.tau(i)

    def safe_wins(m: float) -> bool:
        if m >= 1.0:
            return True  # no uncertainty left to screen
        post = m * (1 - tau) / (m * (1 - tau) + (1 - m) * tau)
        prev = _safe_anchor(params, i, post)
        try:
            _, _, v_screen, _, _ = _screen_value(params, i, prev, m)
        except RegimeError:
            return True
        return reservation_policy(params, params.quota, Signal.L, m) >= v_screen

    return _predicate_edge(safe_wins, 0.0, 1.0, tol)


def _predicate_edge(pred, lo: float, hi: float, tol: float, grid: int = 400) -> float:
    """Largest m in [lo, hi] such that pred holds on [lo, m], to within ``tol``.

    Scans points whose relative offset from ``lo`` is logit-spaced (so very
    short intervals are resolved), then bisects the first failure.
    """
    prev = lo
    for k in range(1, grid + 1):
        x = 1.0 / (1.0 + math.exp(27.6 - 55.2 * k / grid))
        m = lo + (hi - lo) * x if k < grid else hi
        if not pred(m):
            left, right = prev, m
            while right - left > tol:
                mid = 0.5 * (left + right)
                if mid <= left or mid >= right:
                    break
                if pred(mid):
                    left = mid
                else:
                    right = mid
            return left
        prev = m
    return hi


def screening_sequence(params: ModelParams, i: int, mu0: Optional[float] = None,
                       tol: float = 1e-13, max_steps: int = MAX_STEPS) -> ScreeningPath:
    """Build the offers p_t and cutoffs M_t until the prior is covered."""
    validate_params(params)
    q = params.quota
    if not (1 <= i <= q):
        raise PreconditionError("informed voter must be among the first q")
    mu0 = params.prior_high if mu0 is None else mu0
    m1 = _first_cutoff(params, i, tol)
    cutoffs = [m1]
    anchors: List[_Anchor] = []
    while cutoffs[-1] < mu0 - BELIEF_TOL:
        if len(cutoffs) >= max_steps:
            raise ConvergenceError(f"more than {max_steps} screening steps needed")
        t = len(cutoffs) + 1
        lower = cutoffs[-1]
        anchors.append(_anchor_at(params, i, anchors, lower, t - 1))
        prev = anchors[-1]
        prev_prev = anchors[-2] if len(anchors) >= 2 else None

        def short_wins(m: float, prev=prev, prev_prev=prev_prev) -> bool:
            if m <= prev.belief:
                return True
            try:
                _, _, v_long, _, _ = _screen_value(params, i, prev, m)
            except RegimeError:
                return True
            if prev_prev is None:
                v_short = reservation_policy(params, q, Signal.L, m)
            else:
                try:
                    _, _, v_short, _, _ = _screen_value(params, i, prev_prev, m)
                except RegimeError:
                    return False
            return v_short >= v_long

        mt = _predicate_edge(short_wins, lower, 1.0, tol)
        if mt < lower:
            raise RegimeError("cutoff sequence is not monotone")
        if mt <= lower + BELIEF_TOL:
            raise RegimeError(f"screening stalls at belief {lower}")
        cutoffs.append(mt)
    path = ScreeningPath(params, i, mu0, cutoffs, [], [], [], anchors)
    T = path.interval(mu0)
    path.cutoffs = cutoffs[:T]
    path.anchors = anchors[:T - 1]
    beliefs = [path.cutoffs[t - 1] for t in range(1, T)] + [mu0]
    path.beliefs = beliefs
    path.policies = [path.offer(t, b) for t, b in enumerate(beliefs, 1)]
    path.phis = [path.phi(t, b) for t, b in enumerate(beliefs, 1)]
    return path


def _anchor_at(params: ModelParams, i: int, anchors: List[_Anchor], belief: float, t: int) -> _Anchor:
    """On-path node at cutoff M_t, where p_t is offered and rejection leads to M_{t-1}."""
    if t == 1:
        return _safe_anchor(params, i, belief)
    p, phi, _, prop, vot = _screen_value(params, i, anchors[t - 2], belief)
    return _Anchor(belief, p, phi, prop, vot)


def build_screening_profile(params: ModelParams, path: ScreeningPath) -> StrategyProfile:
    """Strategy profile that implements ``path`` at every belief."""
    i, q = path.informed_voter, params.quota

    def proposal(mu: float) -> float:
        return path.proposal(mu)

    def accept(j: int, s: Signal, mu: float, p: float) -> float:
        if j == i:
            t = path.interval(mu)
            p1 = path.safe_policy(mu) if t == 1 else path.anchors[0].policy
            if s == Signal.L or t == 1:
                return 1.0 if p <= p1 + POLICY_TOL else 0.0
            lower = path.anchors[t - 2].policy
            if p <= lower + POLICY_TOL:
                return 1.0
            if p <= path.offer(t, mu) + POLICY_TOL:
                return path.phi(t, mu)
            return 0.0
        if j <= q:
            return 1.0 if p <= reservation_policy(params, q, Signal.H, mu) + POLICY_TOL else 0.0
        return 1.0 if p <= reservation_policy(params, j, Signal.L, mu) + POLICY_TOL else 0.0

    return StrategyProfile(proposal, accept, name="screening",
                           meta={"informed_voter": i, "cutoffs": list(path.cutoffs)})


def pivotal_range(params: ModelParams, mu: float) -> Tuple[float, float]:
    """Interval of policies on which the informed voter is pivotal with certainty."""
    q = params.quota
    lo = reservation_policy(params, q + 1, Signal.L, mu) if q < params.n_voters else 0.0
    return lo, reservation_policy(params, q, Signal.H, mu)
