# A single take-it-or-leave-it offer. Voters best-respond to each other given
# their signals; the proposer picks the best policy on a fine grid.
from agenda_game.benchmarks import complete_info_value, tioli_equilibrium, tioli_limit_value, tioli_value
from agenda_game.core import State, canonical_params

mu = 0.5
for tau in (0.9, 0.99, 0.999):
    params = canonical_params(precisions=(tau,) * 3)
    p, v = tioli_value(params, mu)
    print(f"tau={tau}: best offer {p:.3f}, value {v:.4f}, limit {tioli_limit_value(params, mu):.4f}")

params = canonical_params(precisions=(0.999,) * 3)
eq = tioli_equilibrium(params, mu, 2.0)
print("offer 2.0 passes with prob", eq.pass_prob[State.HIGH], "in the high state and",
      eq.pass_prob[State.LOW], "in the low state")
# with the state known the proposer would get y_q in each state
print("complete information value:", complete_info_value(params, mu))
