"""Poisson binomial distribution of the number of accepting voters."""

from __future__ import annotations

import math
from typing import Sequence, Set, Tuple

import numpy as np

from .errors import DomainError, PreconditionError

MODE_TOL = 1e-12


def _as_vector(z) -> np.ndarray:
    z = np.asarray(z, dtype=float).ravel()
    if np.any(z < 0.0) or np.any(z > 1.0) or np.any(np.isnan(z)):
        raise DomainError("success probabilities must lie in [0, 1]")
    return z


def pmf_table(z) -> np.ndarray:
    """Full table f(0|z), ..., f(N|z) built by adding one trial at a time."""
    z = _as_vector(z)
    f = np.zeros(z.size + 1)
    f[0] = 1.0
    for k, p in enumerate(z, 1):
        # f_k(r) = p f_{k-1}(r-1) + (1-p) f_{k-1}(r)
        f[1:k + 1] = p * f[:k] + (1.0 - p) * f[1:k + 1]
        f[0] *= 1.0 - p
    return f


def pmf(z, r: int) -> float:
    z = _as_vector(z)
    if not (0 <= r <= z.size):
        raise DomainError(f"r={r} outside 0..{z.size}")
    return float(pmf_table(z)[r])


def tail(z, r: int) -> float:
    """P(at least r successes)."""
    f = pmf_table(z)
    return float(f[max(r, 0):].sum())


def modes(z) -> Set[int]:
    f = pmf_table(z)
    top = f.max()
    return {int(r) for r in np.flatnonzero(f >= top - MODE_TOL)}


def mode_candidates(z) -> Set[int]:
    """Modes allowed by the mean/fractional-part characterization.

    With mean m and fractional part d: d == 0 gives {m}; d below 1/(N+1)
    gives floor(m); d above N/(N+1) gives floor(m)+1; otherwise either.
    """
    z = _as_vector(z)
    n = z.size
    m = float(z.sum())
    lo = math.floor(m + 1e-12)
    d = m - lo
    if abs(d) <= 1e-12:
        return {lo}
    if d < 1.0 / (n + 1):
        return {lo}
    if d > n / (n + 1.0):
        return {lo + 1}
    return {lo, lo + 1}


def pivotal_prob(params, accept_probs: Sequence[float], i: int, r: int) -> float:
    """Probability that exactly ``r`` of the voters other than ``i`` accept.

    ``accept_probs`` holds each voter's acceptance probability in a fixed
    state; ``i`` is 1-based. ``r = q - 1`` is the pivotal event. ``params``
    may be None; when given it fixes the committee size.
    """
    z = _as_vector(accept_probs)
    if params is not None and z.size != params.n_voters:
        raise DomainError("one acceptance probability per voter is required")
    others = np.delete(z, i - 1)
    if not (0 <= r <= others.size):
        return 0.0
    return float(pmf_table(others)[r])


def verify_ranking(z, z_prime, q: int, eps: float) -> Tuple[bool, bool]:
    """Check both ranking conclusions for z <= z' pointwise.

    (a) if sum(z) >= q - eps then f(q-1|z) >= f(q-1|z');
    (b) if sum(z') <= q - 1 + eps then f(q|z) <= f(q|z').
    A conclusion whose hypothesis fails is reported as holding.
    """
    z = _as_vector(z)
    zp = _as_vector(z_prime)
    n = z.size
    if zp.size != n:
        raise PreconditionError("vectors differ in length")
    if np.any(z > zp):
        raise PreconditionError("z must be pointwise below z'")
    if not (0.0 < eps < 1.0 / (n + 1)):
        raise PreconditionError(f"eps must lie in (0, 1/(N+1)), got {eps}")
    if not (1 <= q <= n):
        raise PreconditionError(f"q={q} outside 1..{n}")
    f, fp = pmf_table(z), pmf_table(zp)
    tol = 1e-13
    a = True
    if z.sum() >= q - eps:
        a = bool(f[q - 1] >= fp[q - 1] - tol)
    b = True
    if zp.sum() <= q - 1 + eps:
        b = bool(f[q] <= fp[q] + tol)
    return a, b
