"""
The online vector game against a Hadamard adversary
===================================================

Each round the adversary shows n unit-norm vectors whose outer products sum
to the identity, and the player adds one of them with a nonnegative weight.
The Hadamard adversary hides all information: every choice has the same
effect on the characteristic polynomial.  The barrier player still keeps the
condition number below kappa(d).
"""

from ramanujan_lab.game import (BssPlayer, GreedyConditionPlayer, HadamardAdversary, UniformPlayer,
                                charpoly_trace_check, play_game)
from ramanujan_lab.polynomials import kappa, laguerre_roots

n, d = 16, 8
T = d * n // 2
print("kappa(8) =", kappa(8))

res = play_game(BssPlayer(), HadamardAdversary(n), n, T)
print("barrier player condition", round(res.condition, 4), "barrier ok:", res.barrier["ok"])
print("smallest feasibility margin", min(res.margins))

# the final characteristic polynomial is the product of (1 - (s/n) D) applied to x^n
print("charpoly check", charpoly_trace_check(res))

# any player ends up at or above the Laguerre ratio for its own total weight
for player in (UniformPlayer(), GreedyConditionPlayer()):
    r = play_game(player, HadamardAdversary(n), n, T, track_poly=False)
    lag = laguerre_roots(n, T, r.S)
    print(f"{player.name:8s} condition {r.condition:8.4f}   Laguerre ratio {lag[-1] / lag[0]:.4f}")
