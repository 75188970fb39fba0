"""Brute-force reference computations and randomized self-check suites."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import List

import numpy as np

from .poisson_binomial import mode_candidates, modes, pmf_table, verify_ranking


def pmf_by_enumeration(z) -> np.ndarray:
    """f(r|z) summed over all 2^N success patterns."""
    z = np.asarray(z, dtype=float)
    out = np.zeros(z.size + 1)
    for pattern in itertools.product((0, 1), repeat=z.size):
        a = np.asarray(pattern, dtype=bool)
        out[a.sum()] += float(np.prod(np.where(a, z, 1.0 - z)))
    return out


@dataclass
class SuiteReport:
    name: str
    passed: int = 0
    failed: int = 0
    failures: List[dict] = field(default_factory=list)

    def record(self, ok: bool, **info) -> None:
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            if len(self.failures) < 20:
                self.failures.append(info)

    def to_dict(self) -> dict:
        return {"suite": self.name, "passed": self.passed, "failed": self.failed,
                "failures": self.failures}


def poisson_suite(seed: int = 0, trials: int = 1000, max_n: int = 10, tol: float = 1e-12) -> SuiteReport:
    """DP pmf against enumeration, and the mode characterization."""
    rng = np.random.default_rng(seed)
    rep = SuiteReport("poisson")
    for k in range(trials):
        n = int(rng.integers(1, max_n + 1))
        z = rng.random(n)
        err = float(np.max(np.abs(pmf_table(z) - pmf_by_enumeration(z))))
        found = modes(z)
        allowed = mode_candidates(z)
        shape_ok = len(found) <= 2 and (len(found) < 2 or max(found) - min(found) == 1)
        ok = err <= tol and shape_ok and found <= allowed
        rep.record(ok, trial=k, n=n, max_error=err, modes=sorted(found), allowed=sorted(allowed))
    return rep


def ranking_suite(seed: int = 0, trials: int = 10_000, max_n: int = 10) -> SuiteReport:
    """Random instances meeting the ranking preconditions; every one must pass."""
    rng = np.random.default_rng(seed)
    rep = SuiteReport("ranking")
    for k in range(trials):
        z, zp, q, eps = random_ranking_instance(rng, max_n)
        a, b = verify_ranking(z, zp, q, eps)
        rep.record(a and b, trial=k, z=z.tolist(), z_prime=zp.tolist(), q=q, eps=eps)
    return rep


def random_ranking_instance(rng: np.random.Generator, max_n: int = 10):
    """Draw (z, z', q, eps) with z <= z' and at least one hypothesis active."""
    while True:
        n = int(rng.integers(1, max_n + 1))
        q = int(rng.integers(1, n + 1))
        eps = float(rng.uniform(0, 1.0 / (n + 1)))
        if eps == 0.0:
            continue
        z = rng.random(n)
        zp = z + rng.random(n) * (1.0 - z)
        if rng.random() < 0.5:
            # push the smaller vector above q - eps
            z = np.clip(z + (q - eps + rng.random() * (n - q + eps) - z.sum()) / n, 0, 1)
            zp = np.maximum(zp, z)
        else:
            # push the larger vector below q - 1 + eps
            zp = np.clip(zp * min(1.0, (q - 1 + eps) * rng.random() / max(zp.sum(), 1e-12)), 0, 1)
            z = np.minimum(z, zp)
        if z.sum() >= q - eps or zp.sum() <= q - 1 + eps:
            return z, zp, q, eps
