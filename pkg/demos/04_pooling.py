# Equal precision. Voters 1 and 2 vote their signals on a high offer; split
# votes reveal nothing, two rejections send the proposer to a safe offer.
from agenda_game.benchmarks import complete_info_value
from agenda_game.core import canonical_params
from agenda_game.engine import solve_profile
from agenda_game.pooling import all_deviation_gains, build_pooling_profile, on_path_nodes, solve_tilde_p


def show(params, label):
    sol = solve_tilde_p(params)
    prof = build_pooling_profile(params, sol)
    value = solve_profile(params, prof).proposer
    gains = all_deviation_gains(params, prof, on_path_nodes(params, sol))
    print(f"{label}: main offer {sol.tilde_p:.4f} (binding: {sol.binding_constraint}), "
          f"fallback {sol.fallback_p:.4f}, value {value:.4f} vs {complete_info_value(params, 0.5):.4f}, "
          f"max gain {max(gains.values()):.1e}")


# patience and precision moving together: the high-signal voter's wish to
# look like a low type keeps the main offer well below 2.8
for x in (0.99, 0.999, 0.9999):
    show(canonical_params(discount=x, precisions=(x,) * 3), f"delta=tau={x}")

# precision first: the main offer climbs to y_q^h and the value to the benchmark
for e in (1e-5, 1e-7):
    show(canonical_params(discount=0.999, precisions=(1 - e,) * 3), f"delta=0.999, tau=1-{e:g}")
