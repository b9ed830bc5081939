"""Stationary random-walk statistics behind the root-averaging argument.

Exact mode propagates the walk law over directed edges (state after step
``i`` is the pair ``(X_{i-1}, X_i)``), split by whether the walk has
backtracked yet.  This sums over every length-``k`` walk weighted by
``pi(X_0) prod p(X_{j-1}, X_j)`` without listing them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .graph import GraphError, WeightedGraph, degrees

EXACT_MAX_K = 6
EXACT_MAX_N = 200


@dataclass(frozen=True)
class WalkStats:
    k: int
    mode: str
    expected_sqrt_sum: float
    backtrack_probabilities: tuple[float, ...]
    backtrack_weighted: float
    total_probability: float
    standard_error: float | None = None
    nonbacktracking_weighted: float | None = None

    def bounds(self, d: float) -> dict:
        k = self.k
        step_bound = (4 / math.sqrt(d)) / (1 - 4 / math.sqrt(d)) if d > 16 else math.inf
        return {
            "prop1_lower": k / math.sqrt(d) - 2 * k / d,
            "backtrack_step_bound": step_bound,
            "prop2_upper": 40 * k**2 / d**0.75,
        }

    def to_dict(self, d: float | None = None) -> dict:
        out = {
            "k": self.k, "mode": self.mode, "expected_sqrt_sum": self.expected_sqrt_sum,
            "backtrack_probabilities": list(self.backtrack_probabilities),
            "backtrack_weighted": self.backtrack_weighted,
            "total_probability": self.total_probability,
            "standard_error": self.standard_error,
        }
        if d is not None:
            out.update(self.bounds(d))
        return out


def edge_stationary_mean(G: WeightedGraph) -> float:
    """``sum_E w^{3/2} / sum_E w``: the mean of ``sqrt w`` over one stationary step."""
    _, _, w = G.edge_array()
    return float(np.sum(w**1.5) / np.sum(w))


def _directed_edges(G: WeightedGraph):
    u, v, w = G.edge_array()
    tail = np.concatenate([u, v])
    head = np.concatenate([v, u])
    weight = np.concatenate([w, w])
    m = u.size
    reverse = np.concatenate([np.arange(m, 2 * m), np.arange(m)])
    return tail, head, weight, reverse


def _transitions(G: WeightedGraph, tail, head, weight, reverse):
    """Sparse edge-to-edge step matrices: continuing, backtracking, and the
    weight-product kernel used for the non-backtracking sum."""
    wdeg = degrees(G).weighted
    by_tail = [[] for _ in range(G.n)]
    for e, t in enumerate(tail):
        by_tail[t].append(e)
    rows, cols, prob, kern = [], [], [], []
    for e in range(tail.size):
        for f in by_tail[head[e]]:
            rows.append(e)
            cols.append(f)
            prob.append(weight[f] / wdeg[head[e]])
            kern.append(weight[f])
    rows, cols = np.array(rows), np.array(cols)
    prob, kern = np.array(prob), np.array(kern)
    is_back = cols == reverse[rows]
    N = tail.size
    P_nb = sp.csr_matrix((prob[~is_back], (rows[~is_back], cols[~is_back])), shape=(N, N))
    P_bt = sp.csr_matrix((prob[is_back], (rows[is_back], cols[is_back])), shape=(N, N))
    K_nb = sp.csr_matrix((kern[~is_back], (rows[~is_back], cols[~is_back])), shape=(N, N))
    return P_nb, P_bt, K_nb


def walk_stats_exact(G: WeightedGraph, k: int) -> WalkStats:
    if k < 1:
        raise ValueError("need k >= 1")
    if k > EXACT_MAX_K or G.n > EXACT_MAX_N:
        raise GraphError(f"exact mode is limited to k <= {EXACT_MAX_K} and n <= {EXACT_MAX_N}")
    if not G.is_connected():
        raise GraphError("walk statistics need a connected graph")
    tail, head, weight, reverse = _directed_edges(G)
    P_nb, P_bt, K_nb = _transitions(G, tail, head, weight, reverse)
    P_all = P_nb + P_bt
    wdeg = degrees(G).weighted
    total_w = math.fsum(wdeg)
    root_w = np.sqrt(weight)

    clean = weight / total_w          # pi(a) p(a, b)
    dirty = np.zeros_like(clean)
    acc_clean = clean * root_w
    acc_dirty = np.zeros_like(clean)
    nb = weight * wdeg[tail] / total_w  # pi(a) p(a,b) w(a)
    nb_sum = float(nb @ root_w)
    back_probs = []
    for _ in range(2, k + 1):
        back_probs.append(float(((clean + dirty) @ P_bt).sum()))
        new_clean = clean @ P_nb
        new_dirty = clean @ P_bt + dirty @ P_all
        acc_clean_new = acc_clean @ P_nb + new_clean * root_w
        acc_dirty = acc_clean @ P_bt + acc_dirty @ P_all + new_dirty * root_w
        acc_clean, clean, dirty = acc_clean_new, new_clean, new_dirty
        nb = nb @ K_nb
        nb_sum += float(nb @ root_w)
    return WalkStats(
        k=k, mode="exact",
        expected_sqrt_sum=float(acc_clean.sum() + acc_dirty.sum()),
        backtrack_probabilities=tuple(back_probs),
        backtrack_weighted=float(acc_dirty.sum()),
        total_probability=float(clean.sum() + dirty.sum()),
        nonbacktracking_weighted=2.0 * nb_sum,
    )


def sample_walks(G: WeightedGraph, k: int, samples: int, seed: int) -> np.ndarray:
    """``samples x (k+1)`` stationary walks by inverse-CDF sampling over
    neighbors sorted by (weight, id)."""
    rng = np.random.default_rng(seed)
    wdeg = degrees(G).weighted
    pi_cdf = np.cumsum(wdeg) / np.sum(wdeg)
    offsets = np.zeros(G.n + 1, dtype=int)
    nbrs, cum = [], []
    for u in range(G.n):
        items = sorted(G.adj[u], key=lambda t: (t[1], t[0]))
        ws = np.array([w for _, w in items])
        nbrs.extend(v for v, _ in items)
        c = np.cumsum(ws) / ws.sum()
        c[-1] = 1.0
        cum.extend(u + c)  # shifted so one global searchsorted serves every row
        offsets[u + 1] = offsets[u] + len(items)
    nbrs, cum = np.array(nbrs), np.array(cum)
    X = np.empty((samples, k + 1), dtype=int)
    X[:, 0] = np.minimum(np.searchsorted(pi_cdf, rng.random(samples), side="right"), G.n - 1)
    for i in range(1, k + 1):
        cur = X[:, i - 1]
        pos = np.searchsorted(cum, cur + rng.random(samples), side="right")
        pos = np.clip(pos, offsets[cur], offsets[cur + 1] - 1)
        X[:, i] = nbrs[pos]
    return X


def walk_stats_monte_carlo(G: WeightedGraph, k: int, samples: int = 20000, seed: int = 0) -> WalkStats:
    X = sample_walks(G, k, samples, seed)
    W = G.adjacency_matrix()
    steps = np.sqrt(W[X[:, :-1], X[:, 1:]])
    total = steps.sum(axis=1)
    backs = X[:, 2:] == X[:, :-2]
    any_back = backs.any(axis=1) if k >= 2 else np.zeros(samples, dtype=bool)
    return WalkStats(
        k=k, mode="monte_carlo",
        expected_sqrt_sum=float(total.mean()),
        backtrack_probabilities=tuple(float(b) for b in backs.mean(axis=0)),
        backtrack_weighted=float((total * any_back).mean()),
        total_probability=1.0,
        standard_error=float(total.std(ddof=1) / math.sqrt(samples)),
    )


def walk_stats(G: WeightedGraph, k: int, mode: str = "exact", samples: int = 20000,
               seed: int = 0) -> WalkStats:
    if mode == "exact":
        return walk_stats_exact(G, k)
    if mode == "monte_carlo":
        return walk_stats_monte_carlo(G, k, samples, seed)
    raise ValueError(f"unknown mode {mode!r}")
