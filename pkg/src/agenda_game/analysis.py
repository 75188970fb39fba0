"""Closed-form limit payoffs, regimes, quota comparisons and the value of revisions.

Nothing here calls a finite-(delta, tau) solver; the formulas are limits.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from .core import ModelParams, State
from .errors import PreconditionError, RegimeError

BOUNDARY_TOL = 1e-12


class RegimeKind(str, enum.Enum):
    FULL_EXTRACTION = "FullExtraction"
    PARTIAL_SCREENING = "PartialScreening"
    COASE = "Coase"


@dataclass(frozen=True)
class Regime:
    kind: RegimeKind
    informed_voter: Optional[int]
    state_h_limit_policy: float
    on_boundary: bool = False
    quota: Optional[int] = None


def _decisive(params: ModelParams, q: Optional[int]):
    q = params.quota if q is None else q
    return q, params.y(q, State.LOW), params.y(q, State.HIGH)


def classify_regime(params: ModelParams, i: Optional[int], q: Optional[int] = None) -> Regime:
    """Regime of the limit equilibrium with informed voter ``i``.

    ``i=None`` stands for equal precision, where the complete-information
    payoff is attained.
    """
    q, y_lo, y_hi = _decisive(params, q)
    if i is None:
        return Regime(RegimeKind.FULL_EXTRACTION, None, y_hi, False, q)
    if not (1 <= i <= q):
        raise PreconditionError("informed voter must be among the first q")
    gap = params.y(i, State.HIGH) - y_lo
    if gap <= y_lo:
        kind, p = RegimeKind.COASE, y_lo
    elif gap >= y_hi:
        kind, p = RegimeKind.FULL_EXTRACTION, y_hi
    else:
        kind, p = RegimeKind.PARTIAL_SCREENING, gap
    boundary = abs(gap - y_lo) <= BOUNDARY_TOL or abs(gap - y_hi) <= BOUNDARY_TOL
    return Regime(kind, i, p, boundary, q)


def setter_limit_value(params: ModelParams, regime: Regime, mu: float) -> float:
    _, y_lo, _ = _decisive(params, regime.quota)
    return y_lo + mu * (regime.state_h_limit_policy - y_lo)


def no_revision_value(params: ModelParams, mu: float, q: Optional[int] = None) -> float:
    """Limit payoff with a single take-it-or-leave-it offer."""
    _, y_lo, y_hi = _decisive(params, q)
    return y_lo + max(0.0, mu * y_hi - y_lo)


@dataclass(frozen=True)
class QuotaComparison:
    value_q: float
    value_q_tilde: float
    better_quota: int
    threshold: Optional[float]
    on_boundary: bool


def quota_threshold(params: ModelParams, q: int, q_tilde: int, i: int) -> Optional[float]:
    """Belief above which raising the quota from q to q_tilde helps the proposer.

    Returns None when the denominator vanishes (the threshold is undefined).
    """
    y_lo = params.y(q, State.LOW)
    yt_lo, yt_hi = params.y(q_tilde, State.LOW), params.y(q_tilde, State.HIGH)
    y_i = params.y(i, State.HIGH)
    if y_i - yt_lo <= yt_hi:
        return 0.5
    den = 2 * y_lo + yt_hi - y_i - yt_lo
    if abs(den) < 1e-15:
        return None
    return (y_lo - yt_lo) / den


def _threshold_prefers_raise(params: ModelParams, q: int, q_tilde: int, i: int, mu: float,
                             thr: float) -> bool:
    y_lo = params.y(q, State.LOW)
    yt_lo, yt_hi = params.y(q_tilde, State.LOW), params.y(q_tilde, State.HIGH)
    y_i = params.y(i, State.HIGH)
    if y_i - yt_lo <= yt_hi:
        return mu > thr
    den = 2 * y_lo + yt_hi - y_i - yt_lo
    return (mu - thr) * den > 0


def quota_comparison(params: ModelParams, q: int, q_tilde: int, i: int, mu: float) -> QuotaComparison:
    if not (q_tilde > q and 1 <= i <= q and q_tilde <= params.n_voters):
        raise PreconditionError("need 1 <= i <= q < q_tilde <= N")
    ys_l, ys_h = params.reservation_low, params.reservation_high
    for k in range(i - 1, q_tilde - 1):
        if not (ys_l[k] > ys_l[k + 1] and ys_h[k] > ys_h[k + 1]):
            raise PreconditionError("quota comparison needs strictly ordered voters")
    base = classify_regime(params, i, q)
    if base.kind != RegimeKind.PARTIAL_SCREENING:
        raise RegimeError(f"quota comparison needs partial screening at q, found {base.kind.value}")
    v_q = setter_limit_value(params, base, mu)
    v_t = setter_limit_value(params, classify_regime(params, i, q_tilde), mu)
    thr = quota_threshold(params, q, q_tilde, i)
    boundary = abs(v_q - v_t) <= 1e-9
    better = q_tilde if v_t > v_q and not boundary else q
    if thr is not None and not boundary:
        if _threshold_prefers_raise(params, q, q_tilde, i, mu, thr) != (better == q_tilde):
            raise AssertionError("threshold test disagrees with the direct comparison")
    return QuotaComparison(v_q, v_t, better, thr, boundary)


class Verdict(str, enum.Enum):
    VALUABLE = "valuable"
    HARMFUL = "harmful"
    EQUAL = "equal"


@dataclass(frozen=True)
class RevisionComparison:
    with_revisions: float
    without_revisions: float
    verdict: Verdict
    threshold: Optional[float]


def revision_threshold(params: ModelParams, i: Optional[int]) -> Optional[float]:
    """Belief at which revisions stop (partial) or start (Coase) mattering."""
    reg = classify_regime(params, i)
    _, y_lo, y_hi = _decisive(params, None)
    if reg.kind == RegimeKind.PARTIAL_SCREENING:
        return y_lo / (2 * y_lo - params.y(i, State.HIGH) + y_hi)
    if reg.kind == RegimeKind.COASE:
        return y_lo / y_hi
    return None


def revision_value(params: ModelParams, i: Optional[int], mu: float, tol: float = 1e-12) -> RevisionComparison:
    reg = classify_regime(params, i)
    v = setter_limit_value(params, reg, mu)
    vt = no_revision_value(params, mu)
    if abs(v - vt) <= tol:
        verdict = Verdict.EQUAL
    else:
        verdict = Verdict.VALUABLE if v > vt else Verdict.HARMFUL
    return RevisionComparison(v, vt, verdict, revision_threshold(params, i))
