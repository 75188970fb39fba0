import numpy as np
import pytest

from agenda_game.errors import DomainError, PreconditionError
from agenda_game.poisson_binomial import (
    mode_candidates,
    modes,
    pivotal_prob,
    pmf,
    pmf_table,
    tail,
    verify_ranking,
)
from agenda_game.verification import pmf_by_enumeration, poisson_suite, ranking_suite
from oracles import pmf_polynomial, pmf_subsets


def test_pmf_examples():
    assert pmf([0.5, 0.5, 0.5], 2) == pytest.approx(0.375, abs=1e-15)
    assert pmf([1, 1, 0], 2) == 1.0
    z = [0.2, 0.5, 0.9]
    # exactly one success, enumerated by hand: 0.01 + 0.04 + 0.36
    assert pmf(z, 1) == pytest.approx(0.41, abs=1e-15)
    assert pmf(z, 1) == pytest.approx(pmf_subsets(z, 1), abs=1e-15)


def test_pmf_matches_independent_oracles():
    rng = np.random.default_rng(7)
    for _ in range(200):
        z = rng.random(rng.integers(1, 9))
        table = pmf_table(z)
        assert np.max(np.abs(table - pmf_polynomial(z))) < 1e-13
        assert np.max(np.abs(pmf_by_enumeration(z) - pmf_polynomial(z))) < 1e-13


def test_pmf_domain():
    with pytest.raises(DomainError):
        pmf([0.5, 1.2], 1)
    with pytest.raises(DomainError):
        pmf([0.5], 3)


def test_tail():
    assert tail([0.5, 0.5], 1) == pytest.approx(0.75)
    assert tail([0.5, 0.5], 0) == pytest.approx(1.0)


def test_mode_examples():
    assert modes([0.5, 0.5, 0.5]) == {1, 2}
    assert modes([1, 1, 1]) == {3}
    z = [0.9, 0.9, 0.9]
    f = pmf_table(z)
    direct = {int(np.argmax(f))}
    assert modes(z) == direct and modes(z) <= {2, 3}
    assert modes(z) <= mode_candidates(z)


def test_pivotal_examples(params):
    assert pivotal_prob(params, [1.0, 1.0, 1.0], 1, 1) == 0.0
    assert pivotal_prob(None, [0.3, 0.5, 0.5], 1, 1) == pytest.approx(0.5)
    with pytest.raises(DomainError):
        pivotal_prob(params, [0.5, 0.5], 1, 1)


def test_ranking_examples():
    a, b = verify_ranking([0.9] * 3, [0.95] * 3, 2, 0.2)
    assert a and b
    f, fp = pmf_table([0.9] * 3), pmf_table([0.95] * 3)
    assert f[1] >= fp[1]
    a, b = verify_ranking([0.1] * 3, [0.3] * 3, 2, 0.1)
    assert a and b
    assert pmf_table([0.1] * 3)[2] <= pmf_table([0.3] * 3)[2]
    z = [0.4, 0.7, 0.2]
    assert verify_ranking(z, z, 2, 0.2) == (True, True)


@pytest.mark.parametrize("args", [
    ([0.5, 0.5], [0.4, 0.6], 1, 0.1),   # not pointwise ordered
    ([0.5, 0.5], [0.6, 0.6], 1, 0.5),   # eps too large
    ([0.5, 0.5], [0.6, 0.6], 3, 0.1),   # quota out of range
    ([0.5], [0.6, 0.6], 1, 0.1),        # length mismatch
])
def test_ranking_preconditions(args):
    with pytest.raises(PreconditionError):
        verify_ranking(*args)


def test_suites_small_runs_are_clean():
    assert poisson_suite(seed=3, trials=100).failed == 0
    assert ranking_suite(seed=3, trials=500).failed == 0
