# Play the constructed equilibria many times and compare with the exact
# outcome distribution.
from agenda_game.core import canonical_params
from agenda_game.engine import simulate, solve_profile
from agenda_game.pooling import build_pooling_profile, solve_tilde_p
from agenda_game.screening import build_screening_profile, screening_sequence

params = canonical_params(discount=0.999, precisions=(0.999,) * 3)
profiles = {
    "screening": build_screening_profile(params, screening_sequence(params, 1)),
    "pooling": build_pooling_profile(params, solve_tilde_p(params)),
}
for name, prof in profiles.items():
    exact = solve_profile(params, prof)
    sim = simulate(params, prof, seed=42, episodes=100_000)
    print(f"{name}: simulated {sim.proposer_mean:.4f} +/- {sim.proposer_se:.4f}, exact {exact.proposer:.4f}, "
          f"z={sim.z_score(exact.proposer):+.2f}")
    print("   acceptance share by period:", {t: round(v, 4) for t, v in list(sim.acceptance_by_period.items())[:4]})
