"""Spectral sparsification by playing the barrier strategy on the isotropic
edge vectors of a graph, and a scale-free verifier for the sparsifier
relation."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .game import BssPlayer, StaticMenu, make_player, play_game
from .graph import GraphError, WeightedGraph
from .polynomials import kappa, ramanujan_ratio
from .spectral import eig, laplacian, orth_ones_basis, pinv_sqrt


@dataclass(frozen=True)
class EdgeVectorSystem:
    """Columns ``x_e = sqrt(w_e) B^T L^{+1/2} (e_i - e_j)`` in an orthonormal
    basis ``B`` of the complement of the ones vector."""

    graph: WeightedGraph
    basis: np.ndarray
    L_pinv_sqrt: np.ndarray
    vectors: np.ndarray
    edge_index: tuple[tuple[int, int], ...]

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    def isotropy_error(self) -> float:
        X = self.vectors
        return float(np.linalg.norm(X @ X.T - np.eye(self.dim)))


def edge_vectors(G: WeightedGraph) -> EdgeVectorSystem:
    if G.n < 2 or not G.is_connected():
        raise GraphError("edge vectors need a connected graph on at least two vertices")
    L = laplacian(G)
    R = pinv_sqrt(L)
    B = orth_ones_basis(G.n)
    u, v, w = G.edge_array()
    inc = np.zeros((G.n, G.m))
    cols = np.arange(G.m)
    inc[u, cols] = np.sqrt(w)
    inc[v, cols] = -np.sqrt(w)
    X = B.T @ (R @ inc)
    return EdgeVectorSystem(G, B, R, X, tuple(zip(u.tolist(), v.tolist())))


def _relative_spectrum(G: WeightedGraph, H: WeightedGraph) -> np.ndarray:
    """Eigenvalues of ``L(G)^{+1/2} L(H) L(G)^{+1/2}`` on the complement of ones."""
    R = pinv_sqrt(laplacian(G))
    B = orth_ones_basis(G.n)
    M = B.T @ R @ laplacian(H) @ R @ B
    return eig(M).values


def verify_sparsifier(G: WeightedGraph, H: WeightedGraph, eps: float, slack: float = 1e-8) -> dict:
    """Scale-free check of ``L(H) <= L(G) <= (1 + eps) L(H)`` up to one
    uniform rescaling of ``H``: holds iff ``lambda_max / lambda_min`` of the
    pencil is at most ``1 + eps``."""
    if H.n != G.n:
        raise GraphError("graphs must share the vertex set")
    g_pairs = {(u, v) for u, v, _ in G.edges}
    outside = [(u, v) for u, v, _ in H.edges if (u, v) not in g_pairs]
    if outside:
        raise GraphError(f"H uses {len(outside)} pairs that are not edges of G, e.g. {outside[0]}")
    if not G.is_connected() or not H.is_connected():
        raise GraphError("both graphs must be connected")
    vals = _relative_spectrum(G, H)
    lo, hi = float(vals[0]), float(vals[-1])
    k = hi / lo
    return {"holds": k <= (1 + eps) * (1 + slack), "kappa_measured": k,
            "lambda_min_rel": lo, "lambda_max_rel": hi}


@dataclass(frozen=True)
class SparsifierReport:
    graph: WeightedGraph
    sparsifier: WeightedGraph
    d: float
    rounds: int
    kappa_measured: float
    kappa_target: float
    game_condition: float
    barrier: dict | None

    @property
    def edge_count(self) -> int:
        return self.sparsifier.m

    @property
    def eps_measured(self) -> float:
        return self.kappa_measured - 1.0

    def to_dict(self) -> dict:
        return {
            "n": self.graph.n, "m_input": self.graph.m, "d": self.d, "rounds": self.rounds,
            "edge_count": self.edge_count,
            "average_degree": self.sparsifier.average_degree,
            "kappa_measured": self.kappa_measured, "eps_measured": self.eps_measured,
            "kappa_target": self.kappa_target,
            "ramanujan_benchmark": ramanujan_ratio(self.d) if self.d >= 4 else None,
            "game_condition": self.game_condition,
            "barrier": self.barrier,
        }


def sparsify(G: WeightedGraph, d: float, player: str = "bss") -> SparsifierReport:
    """Run ``ceil(d n / 2)`` rounds against the static edge-vector menu.

    The selected edges get weight ``sum s_t w_e`` (repeats merge).  The
    barrier schedule uses ``beta = T / (n - 1)``, the rounds per dimension
    of the complement of ones, which is at least ``d / 2``.
    """
    if d <= 2:
        raise ValueError("need d > 2")
    system = edge_vectors(G)
    T = math.ceil(d * G.n / 2)
    p = make_player(player)
    result = play_game(p, StaticMenu(system.vectors), system.dim, T, track_poly=False)
    weights: dict[int, float] = {}
    for idx, s in zip(result.indices, result.scalings):
        if s > 0:
            weights[idx] = weights.get(idx, 0.0) + s
    _, _, w = G.edge_array()
    edges = tuple(
        (system.edge_index[i][0], system.edge_index[i][1], weights[i] * w[i])
        for i in sorted(weights)
    )
    H = WeightedGraph(G.n, edges)
    check = verify_sparsifier(G, H, kappa(d) - 1)
    return SparsifierReport(
        graph=G, sparsifier=H, d=d, rounds=T, kappa_measured=check["kappa_measured"],
        kappa_target=kappa(d), game_condition=result.condition,
        barrier=result.barrier if isinstance(p, BssPlayer) else None,
    )
