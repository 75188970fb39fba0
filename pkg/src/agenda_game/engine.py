"""Markov strategy profiles, exact outcome distributions and Monte Carlo play.

Stationary Markov strategies depend on the history only through the public
belief, so histories are never stored: the exact forward pass keeps a
collection of (belief, probability) nodes per period and merges equal beliefs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .beliefs import ZERO_LIKELIHOOD, signal_posterior, state_acceptance
from .core import PROPOSER, STATES, ModelParams, Signal, State, discounted_payoff, stage_utility
from .errors import DomainError

BELIEF_DIGITS = 12
DEFAULT_TOL = 1e-10
DEFAULT_MAX_PERIODS = 200


@dataclass
class StrategyProfile:
    """Proposal rule ``pi(mu)`` and acceptance rule ``alpha(i, s, mu, p)``.

    ``proposal_rule`` may return a single policy or a list of
    ``(policy, probability)`` pairs.
    """

    proposal_rule: Callable[[float], object]
    acceptance_rule: Callable[[int, Signal, float, float], float]
    name: str = "profile"
    meta: dict = field(default_factory=dict)

    def proposals(self, mu: float) -> List[Tuple[float, float]]:
        out = self.proposal_rule(mu)
        if out is None:
            raise DomainError(f"proposal rule undefined at belief {mu}")
        if isinstance(out, (int, float, np.floating)):
            return [(float(out), 1.0)]
        pairs = [(float(p), float(w)) for p, w in out]
        total = sum(w for _, w in pairs)
        if total <= 0:
            raise DomainError(f"empty proposal distribution at belief {mu}")
        return [(p, w / total) for p, w in pairs if w > 0]

    def accept(self, i: int, signal: Signal, mu: float, p: float) -> float:
        a = float(self.acceptance_rule(i, Signal(signal), mu, p))
        if not (0.0 <= a <= 1.0):
            raise DomainError(f"acceptance probability {a} outside [0, 1]")
        return a


@dataclass
class OutcomeDistribution:
    """Distribution over (acceptance period, policy) plus a never-accepted atom."""

    atoms: Dict[Tuple[int, float], float]
    never_prob: float
    state: State
    belief: float
    periods: int

    def total(self) -> float:
        return sum(self.atoms.values()) + self.never_prob

    def items(self):
        return sorted(self.atoms.items())


def _vote_profiles(n: int) -> np.ndarray:
    return np.array(list(itertools.product((0, 1), repeat=n)), dtype=bool)


def _likelihoods(alpha_state: np.ndarray, votes: np.ndarray) -> np.ndarray:
    return np.prod(np.where(votes, alpha_state, 1.0 - alpha_state), axis=1)


def _key(mu: float) -> float:
    return round(mu, BELIEF_DIGITS)


def induced_distribution(
    params: ModelParams,
    profile: StrategyProfile,
    mu: float,
    state: State,
    horizon: int = DEFAULT_MAX_PERIODS,
    tol: float = DEFAULT_TOL,
) -> OutcomeDistribution:
    """Exact distribution G^{state, mu} by forward enumeration.

    Runs at most ``horizon`` periods and stops early once the unresolved
    mass drops below ``tol``; whatever remains is the never-accepted atom.
    """
    if horizon < 1:
        raise DomainError("horizon must be at least 1")
    state = State(state)
    votes = _vote_profiles(params.n_voters)
    passes = votes.sum(axis=1) >= params.quota
    atoms: Dict[Tuple[int, float], float] = {}
    nodes: Dict[float, Tuple[float, float]] = {_key(mu): (mu, 1.0)}
    t = 0
    for t in range(1, horizon + 1):
        nxt: Dict[float, Tuple[float, float]] = {}
        for b, mass in nodes.values():
            for p, w in profile.proposals(b):
                alpha = state_acceptance(params, profile, b, p)
                lik = _likelihoods(alpha[state], votes)
                acc = float(lik[passes].sum())
                if acc > 0:
                    k = (t, p)
                    atoms[k] = atoms.get(k, 0.0) + mass * w * acc
                l_h = b * _likelihoods(alpha[State.HIGH], votes)
                l_l = (1.0 - b) * _likelihoods(alpha[State.LOW], votes)
                for idx in np.flatnonzero(~passes & (lik > 0)):
                    tot = l_h[idx] + l_l[idx]
                    b2 = b if tot < ZERO_LIKELIHOOD else l_h[idx] / tot
                    key = _key(b2)
                    old = nxt.get(key)
                    add = mass * w * lik[idx]
                    nxt[key] = (b2, add) if old is None else (old[0], old[1] + add)
        nodes = nxt
        if sum(m for _, m in nodes.values()) < tol:
            break
    never = sum(m for _, m in nodes.values())
    return OutcomeDistribution(atoms=atoms, never_prob=never, state=state, belief=mu, periods=t)


def tail_prob(dist: OutcomeDistribution, p: float) -> float:
    """Probability that a policy strictly above ``p`` is eventually implemented."""
    return sum(w for (_, x), w in dist.atoms.items() if x > p)


def state_value(params: ModelParams, dist: OutcomeDistribution, who: int) -> float:
    """Expected normalized payoff of ``who`` under a single state's distribution."""
    v = sum(w * discounted_payoff(params, who, dist.state, (t, p)) for (t, p), w in dist.atoms.items())
    return v + dist.never_prob * stage_utility(params, who, 0.0, dist.state)


@dataclass
class Payoffs:
    proposer: float
    voters: Dict[Tuple[int, Signal], float]
    by_state: Dict[Tuple[int, State], float]
    truncation_bound: float
    belief: float = 0.5

    def ex_ante(self, who: int) -> float:
        """Value before any signal is drawn, at the belief used for ``proposer``."""
        return self.belief * self.by_state[(who, State.HIGH)] + (1 - self.belief) * self.by_state[(who, State.LOW)]


def expected_payoffs(
    params: ModelParams,
    dists: Tuple[OutcomeDistribution, OutcomeDistribution],
    mu: float,
) -> Payoffs:
    """Discounted expected payoffs given (G^low, G^high) at belief ``mu``.

    Voter values are interim: each signal's posterior weights the states.
    """
    g = {State.LOW: dists[0], State.HIGH: dists[1]}
    for st in STATES:
        if g[st].state != st:
            raise DomainError("distribution pair must be ordered (low, high)")
    by_state = {}
    for who in (PROPOSER, *params.voters):
        for st in STATES:
            by_state[(who, st)] = state_value(params, g[st], who)
    proposer = mu * by_state[(PROPOSER, State.HIGH)] + (1 - mu) * by_state[(PROPOSER, State.LOW)]
    voters = {}
    for i in params.voters:
        for s in (Signal.L, Signal.H):
            post = signal_posterior(mu, s, params.tau(i))
            voters[(i, s)] = post * by_state[(i, State.HIGH)] + (1 - post) * by_state[(i, State.LOW)]
    periods = max(dists[0].periods, dists[1].periods)
    bound = params.discount ** periods * params.policy_cap
    return Payoffs(proposer, voters, by_state, bound, mu)


def solve_profile(params: ModelParams, profile: StrategyProfile, mu: Optional[float] = None,
                  horizon: int = DEFAULT_MAX_PERIODS, tol: float = DEFAULT_TOL) -> Payoffs:
    """Convenience wrapper: both state distributions, then ``expected_payoffs``."""
    mu = params.prior_high if mu is None else mu
    dists = tuple(induced_distribution(params, profile, mu, st, horizon, tol) for st in STATES)
    return expected_payoffs(params, dists, mu)


class ContinuationCache:
    """Memoized state-conditional continuation values W^state(mu) for one profile."""

    def __init__(self, params: ModelParams, profile: StrategyProfile,
                 horizon: int = DEFAULT_MAX_PERIODS, tol: float = DEFAULT_TOL):
        self.params, self.profile = params, profile
        self.horizon, self.tol = horizon, tol
        self._dists: Dict[Tuple[float, State], OutcomeDistribution] = {}

    def dist(self, mu: float, state: State) -> OutcomeDistribution:
        k = (_key(mu), State(state))
        if k not in self._dists:
            self._dists[k] = induced_distribution(self.params, self.profile, mu, state,
                                                  self.horizon, self.tol)
        return self._dists[k]

    def value(self, who: int, mu: float, state: State) -> float:
        return state_value(self.params, self.dist(mu, state), who)


def action_payoff(params: ModelParams, profile: StrategyProfile, voter: int, signal: Signal,
                  mu: float, p: float, action: int, cache: Optional[ContinuationCache] = None) -> float:
    """Interim payoff of casting ``action`` on ``p`` at belief ``mu``.

    Others follow the profile; after a rejection the public updates with the
    profile's strategies (so it cannot tell a deviation apart), and play
    continues from the posterior.
    """
    cache = cache or ContinuationCache(params, profile)
    delta = params.discount
    alpha = state_acceptance(params, profile, mu, p)
    others = [j for j in params.voters if j != voter]
    post = signal_posterior(mu, signal, params.tau(voter))
    total = 0.0
    for st in STATES:
        weight = post if st == State.HIGH else 1.0 - post
        if weight == 0.0:
            continue
        u_now = stage_utility(params, voter, p, st)
        u_zero = stage_utility(params, voter, 0.0, st)
        acc = 0.0
        for rest in itertools.product((0, 1), repeat=len(others)):
            pr = 1.0
            for j, a in zip(others, rest):
                aj = alpha[st, j - 1]
                pr *= aj if a else 1.0 - aj
            if pr == 0.0:
                continue
            votes = list(rest)
            votes.insert(voter - 1, action)
            if sum(votes) >= params.quota:
                acc += pr * u_now
                continue
            a = np.asarray(votes, dtype=bool)
            l_h = mu * float(np.prod(np.where(a, alpha[State.HIGH], 1 - alpha[State.HIGH])))
            l_l = (1 - mu) * float(np.prod(np.where(a, alpha[State.LOW], 1 - alpha[State.LOW])))
            b2 = mu if l_h + l_l < ZERO_LIKELIHOOD else l_h / (l_h + l_l)
            acc += pr * ((1 - delta) * u_zero + delta * cache.value(voter, b2, st))
        total += weight * acc
    return total


def deviation_gain(params: ModelParams, profile: StrategyProfile, voter: int, signal: Signal,
                   mu: float, action: int, p: Optional[float] = None,
                   cache: Optional[ContinuationCache] = None) -> float:
    """Payoff of ``action`` minus the payoff of the prescribed (possibly mixed) vote.

    ``p`` defaults to the unique proposal the profile makes at ``mu``.
    """
    if p is None:
        props = profile.proposals(mu)
        if len(props) != 1:
            raise DomainError("proposal must be given when the proposer mixes")
        p = props[0][0]
    cache = cache or ContinuationCache(params, profile)
    v1 = action_payoff(params, profile, voter, signal, mu, p, 1, cache)
    v0 = action_payoff(params, profile, voter, signal, mu, p, 0, cache)
    a = profile.accept(voter, signal, mu, p)
    prescribed = a * v1 + (1 - a) * v0
    return (v1 if action else v0) - prescribed


@dataclass
class SimulationResult:
    episodes: int
    proposer_mean: float
    proposer_se: float
    voter_mean: Dict[int, float]
    voter_se: Dict[int, float]
    acceptance_by_period: Dict[int, float]
    acceptance_by_state: Dict[str, float]
    never_frac: float

    def z_score(self, exact: float, voter: Optional[int] = None) -> float:
        """Standardized distance of the sample mean from ``exact`` (proposer by default)."""
        mean, se = ((self.proposer_mean, self.proposer_se) if voter is None
                    else (self.voter_mean[voter], self.voter_se[voter]))
        if se == 0:
            return 0.0 if mean == exact else float("inf")
        return (mean - exact) / se


def simulate(params: ModelParams, profile: StrategyProfile, seed: int, episodes: int,
             max_periods: int = DEFAULT_MAX_PERIODS, mu0: Optional[float] = None) -> SimulationResult:
    """Monte Carlo play of ``profile``; deterministic given ``seed``.

    Per period the generator is consumed in a fixed order: one uniform per
    active episode for the proposal, then N uniforms for signals and N for
    votes, voters in label order.
    """
    if episodes < 1:
        raise DomainError("episodes must be at least 1")
    rng = np.random.default_rng(seed)
    n = params.n_voters
    mu0 = params.prior_high if mu0 is None else mu0
    delta = params.discount
    tau = np.asarray(params.precisions)
    high = rng.random(episodes) < mu0
    belief = np.full(episodes, mu0)
    t_acc = np.zeros(episodes, dtype=int)
    p_acc = np.zeros(episodes)
    active = np.arange(episodes)
    for t in range(1, max_periods + 1):
        if active.size == 0:
            break
        u_prop = rng.random(active.size)
        u_sig = rng.random((active.size, n))
        u_vote = rng.random((active.size, n))
        keys = np.round(belief[active], BELIEF_DIGITS)
        uniq, inv = np.unique(keys, return_inverse=True)
        accepted = np.zeros(active.size, dtype=bool)
        new_belief = belief[active].copy()
        policy = np.zeros(active.size)
        for g in range(uniq.size):
            rows = np.flatnonzero(inv == g)
            b = float(belief[active[rows[0]]])
            props = profile.proposals(b)
            cum = np.cumsum([w for _, w in props])
            choice = np.minimum(np.searchsorted(cum, u_prop[rows] * cum[-1], side="right"), len(props) - 1)
            for c, (p, _) in enumerate(props):
                sub = rows[choice == c]
                if sub.size == 0:
                    continue
                policy[sub] = p
                acc_l = np.array([profile.accept(i, Signal.L, b, p) for i in params.voters])
                acc_h = np.array([profile.accept(i, Signal.H, b, p) for i in params.voters])
                correct = u_sig[sub] < tau
                sig_high = np.where(high[active[sub]][:, None], correct, ~correct)
                a_prob = np.where(sig_high, acc_h, acc_l)
                votes = u_vote[sub] < a_prob
                passed = votes.sum(axis=1) >= params.quota
                accepted[sub] = passed
                alpha = np.vstack([tau * acc_l + (1 - tau) * acc_h, (1 - tau) * acc_l + tau * acc_h])
                l_h = b * np.prod(np.where(votes, alpha[1], 1 - alpha[1]), axis=1)
                l_l = (1 - b) * np.prod(np.where(votes, alpha[0], 1 - alpha[0]), axis=1)
                tot = l_h + l_l
                with np.errstate(invalid="ignore", divide="ignore"):
                    nb = np.where(tot < ZERO_LIKELIHOOD, b, l_h / np.where(tot > 0, tot, 1.0))
                new_belief[sub] = nb
        done = active[accepted]
        t_acc[done] = t
        p_acc[done] = policy[accepted]
        rest = active[~accepted]
        belief[rest] = new_belief[~accepted]
        active = rest
    ok = t_acc > 0
    w = np.where(ok, delta ** np.maximum(t_acc - 1, 0), 0.0)
    proposer = w * p_acc
    voter_mean, voter_se = {}, {}
    for i in params.voters:
        y = np.where(high, params.y(i, State.HIGH), params.y(i, State.LOW))
        u0 = -(0.5 * y) ** 2
        up = -(0.5 * y - p_acc) ** 2
        vals = np.where(ok, (1 - w) * u0 + w * up, u0)
        voter_mean[i] = float(vals.mean())
        voter_se[i] = float(vals.std(ddof=1) / np.sqrt(episodes)) if episodes > 1 else 0.0
    by_period = {}
    for t in np.unique(t_acc[ok]):
        by_period[int(t)] = float(np.mean(t_acc == t))
    by_state = {
        "low": float(ok[~high].mean()) if (~high).any() else float("nan"),
        "high": float(ok[high].mean()) if high.any() else float("nan"),
    }
    se = float(proposer.std(ddof=1) / np.sqrt(episodes)) if episodes > 1 else 0.0
    return SimulationResult(
        episodes=episodes,
        proposer_mean=float(proposer.mean()),
        proposer_se=se,
        voter_mean=voter_mean,
        voter_se=voter_se,
        acceptance_by_period=by_period,
        acceptance_by_state=by_state,
        never_frac=float(1 - ok.mean()),
    )


def constant_profile(params: ModelParams, p: float, cutoffs: Optional[Sequence[float]] = None) -> StrategyProfile:
    """Proposer always offers ``p``; voter i accepts iff the policy is at most cutoffs[i-1].

    Cutoffs default to each voter's low-state reservation policy.
    """
    cut = list(cutoffs) if cutoffs is not None else list(params.reservation_low)
    return StrategyProfile(
        proposal_rule=lambda mu: p,
        acceptance_rule=lambda i, s, mu, x: 1.0 if x <= cut[i - 1] else 0.0,
        name="constant",
    )
