import pytest

from agenda_game.beliefs import public_update
from agenda_game.benchmarks import complete_info_value
from agenda_game.core import Signal, State, stage_utility
from agenda_game.engine import ContinuationCache, deviation_gain, induced_distribution, solve_profile
from agenda_game.errors import PreconditionError
from agenda_game.pooling import (
    PoolingSolution,
    all_deviation_gains,
    build_pooling_profile,
    continuation_values,
    double_rejection_belief,
    on_path_nodes,
    solve_tilde_p,
)


@pytest.fixture
def solved(params):
    sol = solve_tilde_p(params)
    return sol, build_pooling_profile(params, sol)


def recursion_value(params, p, fallback, i, state, iters=5000):
    """Iterate V = P(HH) u(p) + P(LL)[(1-d)u0 + d u(f)] + P(split)[(1-d)u0 + d V]."""
    tau, d = params.tau(1), params.discount
    match = tau if state == State.HIGH else 1 - tau
    hh, ll, split = match ** 2, (1 - match) ** 2, 2 * match * (1 - match)
    u = lambda x: stage_utility(params, i, x, state)
    v = 0.0
    for _ in range(iters):
        v = hh * u(p) + ll * ((1 - d) * u(0.0) + d * u(fallback)) + split * ((1 - d) * u(0.0) + d * v)
    return v


@pytest.mark.parametrize("delta", [0.01, 0.9])
def test_continuation_closed_form_matches_recursion(params, delta):
    pr = params.replace(discount=delta)
    for i in (1, 2):
        vl, vh = continuation_values(pr, 2.0, 0.8, 0.5, i)
        assert vl == pytest.approx(recursion_value(pr, 2.0, 0.8, i, State.LOW), abs=1e-12)
        assert vh == pytest.approx(recursion_value(pr, 2.0, 0.8, i, State.HIGH), abs=1e-12)


def test_preconditions(params):
    with pytest.raises(PreconditionError):
        solve_tilde_p(params.replace(quota=1))
    with pytest.raises(PreconditionError):
        solve_tilde_p(params.replace(precisions=(0.9, 0.95, 0.9)))


def test_solution_is_edge_of_engine_feasibility(params):
    """Largest policy with no profitable engine-evaluated deviation matches the solver."""
    sol = solve_tilde_p(params)

    def engine_ok(p):
        trial = PoolingSolution(p, sol.fallback_p, sol.belief, sol.low_belief, {}, "", {}, params)
        prof = build_pooling_profile(params, trial)
        cache = ContinuationCache(params, prof)
        return all(deviation_gain(params, prof, i, s, sol.belief, 1 - int(s), p, cache) <= 1e-12
                   for i in (1, 2) for s in (Signal.L, Signal.H))

    assert engine_ok(sol.tilde_p)
    assert not engine_ok(sol.tilde_p + 1e-4)


def test_vote_records(params, solved):
    sol, prof = solved
    b, p = sol.belief, sol.tilde_p
    for st in (State.LOW, State.HIGH):
        d = induced_distribution(params, prof, b, st, horizon=1)
        tau = params.tau(1)
        both_h = tau ** 2 if st == State.HIGH else (1 - tau) ** 2
        assert d.atoms[(1, p)] == pytest.approx(both_h)
    assert public_update(params, b, p, (1, 0, 0), prof) == pytest.approx(b, abs=1e-14)
    assert public_update(params, b, p, (0, 1, 0), prof) == pytest.approx(b, abs=1e-14)
    low = public_update(params, b, p, (0, 0, 0), prof)
    assert low == pytest.approx(double_rejection_belief(b, params.tau(1)), abs=1e-14)
    assert prof.proposals(low)[0][0] == pytest.approx(sol.fallback_p, abs=1e-12)
    assert prof.proposals(b)[0][0] == p


def test_fallback_accepted_at_once(params, solved):
    sol, prof = solved
    for st in (State.LOW, State.HIGH):
        d = induced_distribution(params, prof, sol.low_belief, st, horizon=1)
        assert d.atoms[(1, sol.fallback_p)] == pytest.approx(1.0)


def test_no_profitable_single_step_deviation(params, solved):
    sol, prof = solved
    gains = all_deviation_gains(params, prof, on_path_nodes(params, sol))
    assert max(gains.values()) <= 1e-9
    # the decisive voter with a high signal does not gain from rejecting
    assert gains[(sol.belief, 2, Signal.H, 0)] <= 1e-12


def test_binding_constraint_reported(params):
    sol = solve_tilde_p(params)
    assert sol.binding_constraint in ("low_signal", "high_signal")
    assert max(sol.residuals.values()) == pytest.approx(0.0, abs=1e-9)


@pytest.mark.parametrize("mu", [0.5, 0.999])
def test_benchmark_reached_when_signals_sharpen_first(params, mu):
    """Patience fixed at 0.999 while the signal error goes to 1e-7."""
    p = params.replace(discount=0.999, precisions=(1 - 1e-7,) * 3, prior_high=mu)
    sol = solve_tilde_p(p)
    prof = build_pooling_profile(p, sol)
    value = solve_profile(p, prof).proposer
    assert abs(sol.tilde_p - 2.8) / 2.8 <= 0.02
    assert abs(value - complete_info_value(p, mu)) / complete_info_value(p, mu) <= 0.02
    gains = all_deviation_gains(p, prof, on_path_nodes(p, sol))
    assert max(v for (b, j, s, a), v in gains.items() if j in (1, 2)) <= 1e-9


def test_joint_limit_stays_below_high_reservation(params):
    """With tau and delta moving together the signaling gain keeps the main offer down."""
    offers = [solve_tilde_p(params.replace(discount=x, precisions=(x,) * 3)).tilde_p
              for x in (0.99, 0.999, 0.9999)]
    assert all(a <= b + 1e-9 for a, b in zip(offers, offers[1:]))
    assert offers[-1] < 2.5
