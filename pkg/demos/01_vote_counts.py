# How many votes does a proposal get? The count of accepting voters is a
# Poisson binomial variable, one Bernoulli trial per voter.
import numpy as np

from agenda_game.poisson_binomial import modes, pivotal_prob, pmf_table
from agenda_game.verification import pmf_by_enumeration

z = np.array([0.2, 0.5, 0.9])
print("pmf by dynamic programming:", pmf_table(z))
print("pmf by enumeration       :", pmf_by_enumeration(z))

# the distribution has at most two modes, adjacent ones
print("modes of (0.5, 0.5, 0.5):", modes([0.5] * 3))
print("modes of (0.9, 0.9, 0.9):", modes([0.9] * 3))

# voter 1 is pivotal under a 2-vote quota when exactly one other voter accepts
print("pivotal probability for voter 1:", pivotal_prob(None, z, 1, 1))
