"""Private posteriors and public belief updates from voting records.

A belief is the probability of the high state. Profiles only need an
``accept(i, signal, mu, p)`` method, so this module does not depend on the
game engine.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .core import ModelParams, Signal, State
from .errors import DomainError

ZERO_LIKELIHOOD = 1e-30


def signal_posterior(mu: float, signal: Signal, tau: float) -> float:
    """Belief in the high state after observing ``signal`` of precision ``tau``."""
    like_h = tau if Signal(signal) == Signal.H else 1.0 - tau
    num = mu * like_h
    den = num + (1.0 - mu) * (1.0 - like_h)
    return num / den if den > 0 else mu


def signal_prob(signal: Signal, state: State, tau: float) -> float:
    """tau_i(s | state)."""
    match = (Signal(signal) == Signal.H) == (State(state) == State.HIGH)
    return tau if match else 1.0 - tau


def state_acceptance(params: ModelParams, profile, mu: float, p: float) -> np.ndarray:
    """Array ``alpha[state, i-1]``: voter i's acceptance probability in each state."""
    out = np.empty((2, params.n_voters))
    for i in params.voters:
        tau = params.tau(i)
        a_l = profile.accept(i, Signal.L, mu, p)
        a_h = profile.accept(i, Signal.H, mu, p)
        out[State.LOW, i - 1] = tau * a_l + (1.0 - tau) * a_h
        out[State.HIGH, i - 1] = (1.0 - tau) * a_l + tau * a_h
    return out


def vote_likelihood(alpha_state: np.ndarray, votes: Sequence[int]) -> float:
    a = np.asarray(votes, dtype=bool)
    return float(np.prod(np.where(a, alpha_state, 1.0 - alpha_state)))


def update_from_alpha(mu: float, alpha: np.ndarray, votes: Sequence[int]) -> float:
    """Bayes update given per-state acceptance probabilities ``alpha``.

    Votes with (numerically) zero probability leave the belief unchanged.
    """
    l_h = mu * vote_likelihood(alpha[State.HIGH], votes)
    l_l = (1.0 - mu) * vote_likelihood(alpha[State.LOW], votes)
    total = l_h + l_l
    if total < ZERO_LIKELIHOOD:
        return mu
    return l_h / total


def public_update(params: ModelParams, mu: float, p: float, votes: Sequence[int], profile) -> float:
    """Posterior public belief after ``p`` is rejected with record ``votes``."""
    if len(votes) != params.n_voters:
        raise DomainError("vote profile length must equal the committee size")
    return update_from_alpha(mu, state_acceptance(params, profile, mu, p), votes)


def check_monotone(params: ModelParams, profile, p: float, mu: float) -> bool:
    """True when every voter accepts at least as often after H as after L."""
    return all(
        profile.accept(i, Signal.H, mu, p) >= profile.accept(i, Signal.L, mu, p)
        for i in params.voters
    )

