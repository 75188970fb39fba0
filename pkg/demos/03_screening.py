# One voter is much better informed than the rest. The proposer walks down a
# ladder of offers; each rejection lowers the public belief to the next cutoff.
from agenda_game.core import Signal, canonical_params
from agenda_game.engine import ContinuationCache, deviation_gain, solve_profile
from agenda_game.screening import build_screening_profile, screening_sequence, theorem2_value

for x in (0.9, 0.99, 0.999):
    params = canonical_params(discount=x, precisions=(x,) * 3)
    path = screening_sequence(params, 1)
    prof = build_screening_profile(params, path)
    value = solve_profile(params, prof).proposer
    print(f"delta=tau={x}: {path.steps} steps, exact value {value:.4f}, limit {theorem2_value(params, 1, 0.5):.4f}")

# the ladder at the most precise setting; play starts in the top interval and moves down
for t, (m, p, phi) in enumerate(zip(path.beliefs, path.policies, path.phis), 1):
    print(f"  interval {t}: belief {m:.6f}  offer {p:.4f}  high-signal acceptance {phi:.4f}")

# the informed voter is indifferent on every rung, so neither vote gains
cache = ContinuationCache(params, prof)
worst = max(abs(deviation_gain(params, prof, 1, Signal.H, b, a, cache=cache))
            for b in path.beliefs[1:] for a in (0, 1))
print("largest informed-voter deviation gain:", worst)
