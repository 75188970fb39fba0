import itertools

import pytest

from agenda_game.beliefs import check_monotone, public_update, signal_posterior
from agenda_game.core import Signal
from agenda_game.engine import StrategyProfile
from agenda_game.errors import DomainError
from oracles import posterior_by_signal_profiles


def rule_profile(rules):
    """rules[i-1](signal) gives voter i's acceptance probability."""
    return StrategyProfile(lambda mu: 1.0, lambda i, s, mu, p: rules[i - 1](s))


informative = lambda s: 1.0 if s == Signal.H else 0.0
inverted = lambda s: 0.0 if s == Signal.H else 1.0
constant = lambda s: 0.7


def test_signal_posterior_examples():
    assert signal_posterior(0.5, Signal.H, 0.9) == pytest.approx(0.9)
    assert signal_posterior(0.0, Signal.H, 0.9) == 0.0
    assert signal_posterior(0.0, Signal.L, 0.9) == 0.0
    assert signal_posterior(0.5, Signal.H, 0.5 + 1e-9) == pytest.approx(0.5, abs=1e-8)


def test_uninformative_votes_keep_prior(params):
    prof = rule_profile([constant] * 3)
    for votes in itertools.product((0, 1), repeat=3):
        assert public_update(params, 0.37, 1.0, votes, prof) == pytest.approx(0.37, abs=1e-15)


def test_single_informative_voter(params):
    prof = rule_profile([informative, constant, constant])
    assert public_update(params, 0.5, 1.0, (1, 0, 0), prof) == pytest.approx(0.9, abs=1e-15)


def test_opposite_votes_cancel(params):
    prof = rule_profile([informative, informative, constant])
    assert public_update(params, 0.3, 1.0, (1, 0, 1), prof) == pytest.approx(0.3, abs=1e-15)


def test_zero_probability_record_leaves_belief(params):
    prof = rule_profile([lambda s: 1.0] * 3)
    assert public_update(params, 0.4, 1.0, (0, 0, 0), prof) == 0.4


def test_matches_signal_profile_enumeration(params):
    mixed = lambda s: 0.8 if s == Signal.H else 0.3
    prof = rule_profile([informative, mixed, constant])
    for mu in (0.1, 0.5, 0.85):
        for votes in itertools.product((0, 1), repeat=3):
            want = posterior_by_signal_profiles(params, prof, mu, 1.0, votes)
            assert public_update(params, mu, 1.0, votes, prof) == pytest.approx(want, abs=1e-14)


def test_length_mismatch(params):
    with pytest.raises(DomainError):
        public_update(params, 0.5, 1.0, (1, 0), rule_profile([constant] * 3))


def test_check_monotone_examples(params):
    assert check_monotone(params, rule_profile([informative] * 3), 1.0, 0.5)
    assert check_monotone(params, rule_profile([constant] * 3), 1.0, 0.5)
    assert not check_monotone(params, rule_profile([inverted, constant, constant]), 1.0, 0.5)
