"""
Sparsifying a complete graph
============================

Edge vectors L^(-1/2) b_e sqrt(w_e) are isotropic on the complement of the
all-ones vector, so the barrier player can pick and reweight about d n / 2
edges.  The result is compared with what an 8-regular Ramanujan graph would
achieve.
"""

from ramanujan_lab.graph import degrees, gen_complete
from ramanujan_lab.polynomials import kappa, ramanujan_ratio
from ramanujan_lab.sparsifier import edge_vectors, sparsify, verify_sparsifier

G = gen_complete(32)
print("isotropy error of the edge vectors", edge_vectors(G).isotropy_error())

rep = sparsify(G, 8)
H = rep.sparsifier
print("edges kept", rep.edge_count, "of", G.m)
print("pencil condition", round(rep.kappa_measured, 4), "bound", kappa(8))
print("Ramanujan benchmark", round(ramanujan_ratio(8), 4))
print("verified:", verify_sparsifier(G, H, kappa(8) - 1)["holds"])
deg = degrees(H)
print("combinatorial degrees", deg.min_combinatorial, "to", deg.max_combinatorial)
