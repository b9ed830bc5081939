"""Dense symmetric linear algebra on graph Laplacians."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import WeightedGraph, degrees

RANK_TOL = 1e-10


class SpectralError(ValueError):
    pass


@dataclass(frozen=True)
class SymmetricSpectrum:
    values: np.ndarray
    vectors: np.ndarray | None = None

    @property
    def lambda_min(self) -> float:
        return float(self.values[0])

    @property
    def lambda_max(self) -> float:
        return float(self.values[-1])


def laplacian(G: WeightedGraph) -> np.ndarray:
    """``L = D - W``; the quadratic form is ``sum w(u,v) (f(u) - f(v))^2``."""
    W = G.adjacency_matrix()
    return np.diag(degrees(G).weighted) - W


def _as_symmetric(M) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise SpectralError(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise SpectralError("matrix has non-finite entries")
    # only the lower triangle is trusted
    return np.tril(M) + np.tril(M, -1).T


def eig(M, want_vectors: bool = False) -> SymmetricSpectrum:
    """Ascending eigenvalues (and orthonormal eigenvectors as columns).

    When vectors are requested each one is sign-fixed so that its
    largest-magnitude entry is positive, which makes downstream consumers
    deterministic.
    """
    A = _as_symmetric(M)
    if not want_vectors:
        return SymmetricSpectrum(np.linalg.eigvalsh(A))
    vals, vecs = np.linalg.eigh(A)
    idx = np.argmax(np.abs(vecs), axis=0)
    signs = np.sign(vecs[idx, np.arange(vecs.shape[1])])
    signs[signs == 0] = 1.0
    return SymmetricSpectrum(vals, vecs * signs)


def rayleigh(M, f) -> float:
    f = np.asarray(f, dtype=float)
    nrm2 = float(f @ f)
    if nrm2 == 0.0:
        raise SpectralError("Rayleigh quotient of the zero vector")
    return float(f @ np.asarray(M) @ f) / nrm2


def quadratic_form(G: WeightedGraph, f) -> float:
    """Edge-sum form ``sum_{uv} w(u,v) (f(u) - f(v))^2``, no matrix needed."""
    u, v, w = G.edge_array()
    f = np.asarray(f, dtype=float)
    return float(np.sum(w * (f[u] - f[v]) ** 2))


def project_orth_ones(f) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    return f - f.mean()


def lambda_ratio(G: WeightedGraph, tol: float = 1e-9) -> dict:
    if G.n < 2:
        raise SpectralError("lambda_2 needs at least two vertices")
    vals = eig(laplacian(G)).values
    lam2, lamn = float(vals[1]), float(vals[-1])
    if lam2 <= tol * max(lamn, 1.0):
        raise SpectralError(f"graph is disconnected (lambda_2 = {lam2:.3e})")
    return {"lambda2": lam2, "lambdan": lamn, "ratio": lamn / lam2}


def pinv_sqrt(M, rank_tol: float = RANK_TOL) -> np.ndarray:
    """``M^{+1/2}`` for positive semidefinite ``M``; eigenvalues below
    ``rank_tol * lambda_max`` are treated as zero."""
    spec = eig(M, want_vectors=True)
    vals, U = spec.values, spec.vectors
    scale = max(float(np.max(np.abs(vals))), 0.0) if vals.size else 0.0
    cutoff = rank_tol * scale
    if vals.size and vals[0] < -max(cutoff, 1e-300):
        raise SpectralError(f"matrix is not positive semidefinite (eigenvalue {vals[0]:.3e})")
    inv = np.zeros_like(vals)
    keep = vals > cutoff
    inv[keep] = 1.0 / np.sqrt(vals[keep])
    return (U * inv) @ U.T


def orth_ones_basis(n: int) -> np.ndarray:
    """``n x (n-1)`` matrix with orthonormal columns spanning the complement of the ones vector."""
    Q, _ = np.linalg.qr(np.column_stack([np.ones(n), np.eye(n)[:, : n - 1]]))
    return Q[:, 1:]
