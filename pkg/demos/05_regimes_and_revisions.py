# Limit payoffs in closed form: which regime applies, whether revisions help
# the proposer, and when a higher quota pays off.
import numpy as np

from agenda_game.analysis import classify_regime, no_revision_value, quota_comparison, revision_value, setter_limit_value
from agenda_game.core import canonical_params

params = canonical_params()
for y1h in (3.0, 5.0):
    p = params.replace(reservation_high=(y1h, 2.8, 2.2))
    r = classify_regime(p, 1)
    print(f"y_1^h={y1h}: {r.kind.value}, high-state policy {r.state_h_limit_policy}")
coase = params.replace(reservation_low=(1.5, 1.0, 0.5), reservation_high=(1.8, 1.7, 1.2))
print("Coase variant:", classify_regime(coase, 1).kind.value)

# value with and without revisions across priors; they cross at 1/1.8
reg = classify_regime(params, 1)
for mu in np.linspace(0, 1, 11):
    rv = revision_value(params, 1, mu)
    print(f"mu={mu:.1f}  V_A={setter_limit_value(params, reg, mu):.3f}  V_T={no_revision_value(params, mu):.3f}  {rv.verdict.value}")

for mu in (0.5, 0.8):
    c = quota_comparison(params, 2, 3, 1, mu)
    print(f"mu={mu}: quota 2 -> {c.value_q:.3f}, quota 3 -> {c.value_q_tilde:.3f}; better: {c.better_quota}")
