import math

import pytest

from agenda_game.beliefs import public_update
from agenda_game.core import ModelParams, Signal, State, reservation_policy
from agenda_game.engine import ContinuationCache, deviation_gain, induced_distribution, tail_prob
from agenda_game.errors import PreconditionError, RegimeError
from agenda_game.screening import (
    acceptance_prob,
    build_screening_profile,
    pivotal_range,
    screening_sequence,
    theorem2_value,
)


def single_voter(y_hi=3.0, delta=0.9, tau=1 - 1e-12):
    return ModelParams(1, 1, 10.0, delta, (tau,), (1.0,), (y_hi,), 0.5)


def test_acceptance_prob_examples():
    assert acceptance_prob(0.5, 0.2, 0.9) == pytest.approx(6 / 7, abs=1e-12)
    assert acceptance_prob(0.5, 0.5 - 1e-9, 0.9) < 1e-7
    assert acceptance_prob(0.5, 1e-9, 1 - 1e-9) == pytest.approx(1.0, abs=1e-6)
    with pytest.raises(PreconditionError):
        acceptance_prob(0.3, 0.4, 0.9)
    with pytest.raises(RegimeError):
        acceptance_prob(0.5, 0.01, 0.6)


def test_limit_value_examples(params):
    assert theorem2_value(params, 1, 0.5) == pytest.approx(1.5)
    assert theorem2_value(params.replace(reservation_high=(5.0, 2.8, 2.2)), 1, 0.5) == pytest.approx(1.9)
    assert theorem2_value(params.replace(reservation_high=(1.8, 1.7, 1.2),
                                         reservation_low=(1.5, 1.0, 0.5)), 1, 0.5) == pytest.approx(1.0)
    with pytest.raises(PreconditionError):
        theorem2_value(params, 3, 0.5)


def test_second_offer_closed_form():
    path = screening_sequence(single_voter(), 1)
    assert path.policies[1] == pytest.approx(1.5 + math.sqrt(0.45), abs=1e-9)


def test_second_offer_approaches_gap_as_patience_grows():
    offers = [screening_sequence(single_voter(delta=d), 1).policies[1] for d in (0.9, 0.99, 0.999)]
    assert offers[0] > offers[1] > offers[2]
    assert offers[2] == pytest.approx(2.0, abs=5e-3)


def test_second_offer_collapses_when_screening_is_useless():
    path = screening_sequence(single_voter(y_hi=1.8, delta=0.999), 1)
    assert path.policies[1] == pytest.approx(1.0, abs=1e-2)


def test_path_shape(params):
    path = screening_sequence(params, 1)
    assert path.cutoffs == sorted(path.cutoffs)
    assert all(a < b for a, b in zip(path.policies, path.policies[1:]))
    assert path.beliefs[-1] == 0.5
    assert path.phis[0] == 1.0 and all(0 < f <= 1 for f in path.phis)
    assert path.policies[0] == pytest.approx(reservation_policy(params, 2, Signal.L, path.beliefs[0]))


def test_profile_below_first_cutoff(params):
    path = screening_sequence(params, 1)
    prof = build_screening_profile(params, path)
    mu = 0.5 * path.cutoffs[0]
    p1 = prof.proposals(mu)[0][0]
    for st in (State.LOW, State.HIGH):
        d = induced_distribution(params, prof, mu, st, horizon=1)
        assert d.atoms[(1, p1)] == pytest.approx(1.0)


def test_profile_informed_voter_rules(params):
    path = screening_sequence(params, 1)
    prof = build_screening_profile(params, path)
    mu = path.beliefs[1]
    p2 = path.policies[1]
    assert prof.accept(1, Signal.H, mu, p2) == pytest.approx(path.phis[1])
    assert prof.accept(1, Signal.L, mu, p2) == 0.0
    assert prof.accept(1, Signal.L, mu, path.policies[0]) == 1.0


def test_rejection_moves_belief_to_previous_cutoff(params):
    path = screening_sequence(params, 1)
    prof = build_screening_profile(params, path)
    for t in range(2, path.steps + 1):
        b, p = path.beliefs[t - 1], path.policies[t - 1]
        votes = [0 if j == 1 else prof.accept(j, Signal.H, b, p) for j in params.voters]
        assert public_update(params, b, p, votes, prof) == pytest.approx(path.beliefs[t - 2], abs=1e-12)


def test_informed_voter_is_indifferent(params):
    path = screening_sequence(params, 1)
    prof = build_screening_profile(params, path)
    cache = ContinuationCache(params, prof)
    for t in range(2, path.steps + 1):
        b = path.beliefs[t - 1]
        for a in (0, 1):
            assert abs(deviation_gain(params, prof, 1, Signal.H, b, a, cache=cache)) <= 1e-9


def test_skimming_after_rejection(precise):
    path = screening_sequence(precise, 1)
    prof = build_screening_profile(precise, path)
    for t in range(2, path.steps + 1):
        after = path.beliefs[t - 2]
        for st in (State.LOW, State.HIGH):
            d = induced_distribution(precise, prof, after, st)
            assert tail_prob(d, path.policies[t - 1]) <= 1e-9


def test_pivotal_range(params):
    lo, hi = pivotal_range(params, 0.5)
    assert lo == pytest.approx(reservation_policy(params, 3, Signal.L, 0.5))
    assert hi == pytest.approx(reservation_policy(params, 2, Signal.H, 0.5))


def test_uninformed_voter_rejected_as_informed(params):
    with pytest.raises(PreconditionError):
        screening_sequence(params, 3)
