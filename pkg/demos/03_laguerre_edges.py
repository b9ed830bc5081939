"""
Extreme zeros of (1 - (S/T) D)^T x^n
====================================

With the same weight every round, the polynomial is a rescaled associated
Laguerre polynomial.  Its extreme zeros drift toward the Marchenko-Pastur
edges S (1 -+ sqrt(n/T))^2 as n grows with T/n fixed.
"""

from ramanujan_lab.polynomials import laguerre_poly, laguerre_roots, mp_edges, real_roots

for n in (8, 16, 32, 64):
    T = 4 * n
    S = 1.0
    roots = laguerre_roots(n, T, S)
    pred = mp_edges(n, T, S)
    print(f"n={n:3d}  zeros [{roots[0]:.4f}, {roots[-1]:.4f}]   "
          f"edges [{pred['lambda_min_pred']:.4f}, {pred['lambda_max_pred']:.4f}]")

# the tridiagonal route agrees with exact-coefficient root finding
n, T = 12, 48
exact = real_roots(laguerre_poly(n, T, 1))
print("max difference, Jacobi vs exact:", abs(exact - laguerre_roots(n, T, 1)).max())
