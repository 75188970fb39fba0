"""Complete-information payoff and the one-shot (take-it-or-leave-it) benchmark."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .core import ModelParams, Signal, State, decisive_values, reservation_policy, stage_utility
from .errors import ConvergenceError, DomainError
from .poisson_binomial import pivotal_prob, pmf_table

log = logging.getLogger(__name__)


def complete_info_value(params: ModelParams, mu: float) -> float:
    y_lo, y_hi = decisive_values(params)
    return mu * y_hi + (1.0 - mu) * y_lo


def tioli_limit_value(params: ModelParams, mu: float) -> float:
    """Limit of the one-shot value as signals become precise: max{y_q^l, mu y_q^h}."""
    y_lo, y_hi = decisive_values(params)
    return max(y_lo, mu * y_hi)


@dataclass
class VotingEquilibrium:
    policy: float
    accept: np.ndarray  # accept[i-1, signal]
    state_accept: np.ndarray  # state_accept[state, i-1]
    pass_prob: Dict[State, float]
    iterations: int
    trace: List[np.ndarray] = field(default_factory=list)

    def rule(self, i: int, signal: Signal) -> float:
        return float(self.accept[i - 1, int(signal)])


def _state_accept(params: ModelParams, accept: np.ndarray) -> np.ndarray:
    tau = np.asarray(params.precisions)
    lo = tau * accept[:, 0] + (1 - tau) * accept[:, 1]
    hi = (1 - tau) * accept[:, 0] + tau * accept[:, 1]
    return np.vstack([lo, hi])


def vote_difference(params: ModelParams, mu: float, p: float, i: int, signal: Signal,
                    state_accept: np.ndarray) -> Tuple[float, bool]:
    """Expected gain from accepting over rejecting for voter ``i``.

    Returns the pivotal-weighted gain when voter i is pivotal with positive
    probability, otherwise the sincere (unconditional) gain; the flag reports
    which one was used.
    """
    tau = params.tau(i)
    sincere, pivotal, piv_mass = 0.0, 0.0, 0.0
    for st in (State.LOW, State.HIGH):
        w = mu if st == State.HIGH else 1.0 - mu
        match = (signal == Signal.H) == (st == State.HIGH)
        w *= tau if match else 1.0 - tau
        gain = stage_utility(params, i, p, st) - stage_utility(params, i, 0.0, st)
        piv = pivotal_prob(params, state_accept[st], i, params.quota - 1)
        sincere += w * gain
        pivotal += w * piv * gain
        piv_mass += w * piv
    return (pivotal, True) if piv_mass > 0 else (sincere, False)


def tioli_equilibrium(params: ModelParams, mu: float, p: float, max_iter: int = 200,
                      tol: float = 1e-9) -> VotingEquilibrium:
    """One-shot voting equilibrium on ``p`` by best-response iteration.

    Starts from sincere voting and updates voters in label order; a tie
    counts as acceptance.
    """
    if not (0.0 <= p <= params.policy_cap):
        raise DomainError(f"policy {p} outside [0, {params.policy_cap}]")
    n = params.n_voters
    accept = np.zeros((n, 2))
    for i in params.voters:
        for s in (Signal.L, Signal.H):
            accept[i - 1, s] = 1.0 if p <= reservation_policy(params, i, s, mu) else 0.0
    trace = [accept.copy()]
    for it in range(1, max_iter + 1):
        old = accept.copy()
        for i in params.voters:
            sa = _state_accept(params, accept)
            for s in (Signal.L, Signal.H):
                d, _ = vote_difference(params, mu, p, i, s, sa)
                accept[i - 1, s] = 1.0 if d >= -1e-15 else 0.0
        trace.append(accept.copy())
        if np.max(np.abs(accept - old)) <= tol:
            sa = _state_accept(params, accept)
            pass_prob = {st: float(pmf_table(sa[st])[params.quota:].sum()) for st in (State.LOW, State.HIGH)}
            return VotingEquilibrium(p, accept, sa, pass_prob, it, trace)
    raise ConvergenceError(f"best-response iteration did not settle at p={p}", trace[-6:])


def candidate_policies(params: ModelParams, mu: float, spacing: Optional[float] = None) -> np.ndarray:
    """Grid of spacing 1e-3*M plus every reservation policy (exact kinks)."""
    spacing = 1e-3 * params.policy_cap if spacing is None else spacing
    top = max(params.reservation_high)
    grid = np.arange(0.0, top + spacing, spacing)
    extra = [params.y(i, st) for i in params.voters for st in (State.LOW, State.HIGH)]
    extra += [reservation_policy(params, i, s, mu) for i in params.voters for s in (Signal.L, Signal.H)]
    pts = np.concatenate([grid, extra])
    pts = pts[(pts >= 0) & (pts <= params.policy_cap)]
    return np.unique(pts)


def tioli_value(params: ModelParams, mu: float, spacing: Optional[float] = None,
                skipped: Optional[List[float]] = None) -> Tuple[float, float]:
    """Best single proposal and its expected payoff when no revision is possible.

    Candidates whose voting stage cycles under best responses are left out;
    their policies are appended to ``skipped`` when a list is passed.
    """
    best_p, best_v = 0.0, -np.inf
    for p in candidate_policies(params, mu, spacing):
        try:
            eq = tioli_equilibrium(params, mu, float(p))
        except ConvergenceError:
            log.debug("voting stage cycles at p=%r; candidate skipped", float(p))
            if skipped is not None:
                skipped.append(float(p))
            continue
        v = p * (mu * eq.pass_prob[State.HIGH] + (1 - mu) * eq.pass_prob[State.LOW])
        if v > best_v + 1e-15:
            best_p, best_v = float(p), float(v)
    return best_p, best_v
