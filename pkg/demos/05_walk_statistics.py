"""
Stationary random walks and backtracking
========================================

Start a weighted walk from its stationary distribution.  Every step then has
the same edge law, so the expected sum of sqrt(weight) over k steps is k times
one step.  The exact dynamic program below agrees with Monte Carlo sampling.
"""

import numpy as np

from ramanujan_lab.graph import gen_complete, gen_cycle
from ramanujan_lab.walks import walk_stats_exact, walk_stats_monte_carlo

d = 25
G = gen_complete(26)
G = G.with_weights(np.full(G.m, 1.0 / d))
ws = walk_stats_exact(G, 3)
print("E sum sqrt w =", ws.expected_sqrt_sum, " k/sqrt(d) =", 3 / np.sqrt(d))
print("backtrack probability per step", ws.backtrack_probabilities)
print("bounds", ws.bounds(d))

# an irregular example, exact against sampled
C = gen_cycle(10).with_weights(np.linspace(0.2, 1.0, 10))
ex = walk_stats_exact(C, 3)
mc = walk_stats_monte_carlo(C, 3, samples=20000, seed=0)
print(f"exact {ex.expected_sqrt_sum:.5f}   sampled {mc.expected_sqrt_sum:.5f} +- {mc.standard_error:.5f}")
