"""Game primitives: parameters, utilities, discounted payoffs, reservation policies.

Voters are labelled ``1..N`` as in the model; the proposer is ``PROPOSER``.
States and signals are small integer enums so they can index arrays.
"""

from __future__ import annotations

import dataclasses
import enum
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from .errors import (
    CapError,
    DomainError,
    MonotonicityError,
    OrderingError,
    QuotaError,
    RangeError,
)

PROPOSER = 0


class State(enum.IntEnum):
    LOW = 0
    HIGH = 1


class Signal(enum.IntEnum):
    L = 0
    H = 1


STATES = (State.LOW, State.HIGH)
SIGNALS = (Signal.L, Signal.H)


class OrderingWarning(UserWarning):
    """Two adjacent voters share an ideal policy in some state."""


@dataclass(frozen=True)
class ModelParams:
    n_voters: int
    quota: int
    policy_cap: float
    discount: float
    precisions: Tuple[float, ...]
    reservation_low: Tuple[float, ...]
    reservation_high: Tuple[float, ...]
    prior_high: float

    def __post_init__(self):
        for name in ("precisions", "reservation_low", "reservation_high"):
            object.__setattr__(self, name, tuple(float(v) for v in getattr(self, name)))

    def replace(self, **changes) -> "ModelParams":
        return dataclasses.replace(self, **changes)

    def y(self, i: int, state: State) -> float:
        """Reservation policy y_i^state of voter ``i`` (1-based)."""
        ys = self.reservation_high if state == State.HIGH else self.reservation_low
        return ys[i - 1]

    def tau(self, i: int) -> float:
        return self.precisions[i - 1]

    @property
    def voters(self) -> range:
        return range(1, self.n_voters + 1)

    def to_dict(self) -> dict:
        return {f.name: (list(v) if isinstance(v := getattr(self, f.name), tuple) else v)
                for f in dataclasses.fields(self)}

    @classmethod
    def from_dict(cls, data: dict) -> "ModelParams":
        return cls(**data)


def canonical_params(**changes) -> ModelParams:
    """Three-voter committee used throughout the tests and demos."""
    base = ModelParams(
        n_voters=3,
        quota=2,
        policy_cap=10.0,
        discount=0.9,
        precisions=(0.9, 0.9, 0.9),
        reservation_low=(2.0, 1.0, 0.5),
        reservation_high=(3.0, 2.8, 2.2),
        prior_high=0.5,
    )
    return base.replace(**changes) if changes else base


def validate_params(params: ModelParams, strict: bool = False) -> ModelParams:
    """Check the model assumptions; return ``params`` unchanged when they hold.

    Ties between adjacent voters only warn unless ``strict`` is set.
    """
    n = params.n_voters
    if not isinstance(n, int) or n < 1:
        raise RangeError(f"n_voters must be a positive integer, got {n!r}")
    for name in ("precisions", "reservation_low", "reservation_high"):
        if len(getattr(params, name)) != n:
            raise RangeError(f"{name} must have length {n}")
    if not (1 <= params.quota <= n):
        raise QuotaError(f"quota {params.quota} outside 1..{n}")
    if not (0.0 < params.discount < 1.0):
        raise RangeError(f"discount {params.discount} outside (0, 1)")
    for i, t in enumerate(params.precisions, 1):
        if not (0.5 < t < 1.0):
            raise RangeError(f"precision of voter {i} is {t}, outside (1/2, 1)")
    if not (0.0 < params.prior_high < 1.0):
        raise RangeError(f"prior {params.prior_high} outside (0, 1)")
    if not params.policy_cap > 0:
        raise RangeError("policy cap must be positive")
    for i, (lo, hi) in enumerate(zip(params.reservation_low, params.reservation_high), 1):
        if not (0.0 < lo < hi):
            raise MonotonicityError(f"voter {i}: need 0 < y_low={lo} < y_high={hi}")
    for label, ys in (("low", params.reservation_low), ("high", params.reservation_high)):
        for i in range(n - 1):
            if ys[i] < ys[i + 1]:
                raise OrderingError(f"state {label}: voter {i + 1} below voter {i + 2}")
            if ys[i] == ys[i + 1]:
                msg = f"state {label}: voters {i + 1} and {i + 2} tie"
                if strict:
                    raise OrderingError(msg)
                warnings.warn(msg, OrderingWarning, stacklevel=2)
    if max(params.reservation_high) > params.policy_cap:
        raise CapError("largest reservation policy exceeds the policy cap")
    return params


def _check_policy(params: ModelParams, x: float) -> None:
    if not (0.0 <= x <= params.policy_cap):
        raise DomainError(f"policy {x} outside [0, {params.policy_cap}]")


def stage_utility(params: ModelParams, who: int, x: float, state: State) -> float:
    """Per-period utility: ``x`` for the proposer, quadratic loss for voters."""
    _check_policy(params, x)
    if who == PROPOSER:
        return float(x)
    return -(0.5 * params.y(who, state) - x) ** 2


Outcome = Optional[Tuple[int, float]]


def discounted_payoff(params: ModelParams, who: int, state: State, outcome: Outcome) -> float:
    """Normalized payoff when the status quo 0 holds until ``outcome=(t, p)``.

    ``None`` means the proposal is never accepted.
    """
    u0 = stage_utility(params, who, 0.0, state)
    if outcome is None:
        return u0
    t, p = outcome
    if t < 1:
        raise DomainError(f"acceptance period must be >= 1, got {t}")
    w = params.discount ** (t - 1)
    return (1.0 - w) * u0 + w * stage_utility(params, who, p, state)


def _posterior(mu: float, signal: Signal, tau: float) -> float:
    like_h = tau if signal == Signal.H else 1.0 - tau
    num = mu * like_h
    den = num + (1.0 - mu) * (1.0 - like_h)
    return num / den if den > 0 else mu


def reservation_policy(params: ModelParams, i: int, signal: Signal, mu: float) -> float:
    """Largest policy voter ``i`` with ``signal`` weakly prefers to the status quo.

    Under quadratic loss this is the posterior mean of y_i^state.
    """
    post = _posterior(mu, signal, params.tau(i))
    p = post * params.y(i, State.HIGH) + (1.0 - post) * params.y(i, State.LOW)
    return min(p, params.policy_cap)


def expected_utility(params: ModelParams, i: int, x: float, post_high: float) -> float:
    """E[u_i(x)] for voter ``i`` holding belief ``post_high`` on the high state."""
    return (post_high * stage_utility(params, i, x, State.HIGH)
            + (1.0 - post_high) * stage_utility(params, i, x, State.LOW))


def as_signal(s) -> Signal:
    if isinstance(s, str):
        return Signal[s.upper()]
    return Signal(int(s))


def as_state(w) -> State:
    if isinstance(w, str):
        key = w.lower()
        return {"l": State.LOW, "low": State.LOW, "h": State.HIGH, "high": State.HIGH}[key]
    return State(int(w))


def decisive_values(params: ModelParams, q: Optional[int] = None) -> Tuple[float, float]:
    """(y_q^low, y_q^high) for quota ``q`` (defaults to the model quota)."""
    q = params.quota if q is None else q
    return params.y(q, State.LOW), params.y(q, State.HIGH)


__all__: Sequence[str] = [
    "PROPOSER", "State", "Signal", "STATES", "SIGNALS", "ModelParams", "OrderingWarning",
    "canonical_params", "validate_params", "stage_utility", "discounted_payoff",
    "reservation_policy", "expected_utility", "as_signal", "as_state", "decisive_values",
]
