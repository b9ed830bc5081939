"""Test-vector certificates lower-bounding ``lambda_n / lambda_2`` of a
weighted graph Laplacian.

The vector ``f_r`` lives on the radius-``k`` ball around a root ``r``:
``f_r(v)`` is the square root of the product of edge weights along the
unique shortest path from ``r``.  Flipping its sign on odd levels gives
``f'``.  Since ``lambda_2 <= R(f_perp)`` and ``lambda_n >= R(f'_perp)``
(Rayleigh quotients), the ratio of the two quotients is a rigorous lower
bound whenever the forms are computed exactly, with no asymptotic constants
involved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .graph import (BfsTree, GraphError, WeightedGraph, bfs_tree, degrees,
                    girth_at_least)
from .spectral import lambda_ratio, laplacian, project_orth_ones, quadratic_form, rayleigh

ALL_ROOTS_MAX_N = 5000
SAMPLED_ROOTS = 512


class CertificateError(ValueError):
    pass


@dataclass(frozen=True)
class TestFunction:
    __test__ = False  # keep pytest from collecting this class

    graph: WeightedGraph
    root: int
    k: int
    f: np.ndarray
    tree: BfsTree

    def level_sums(self) -> np.ndarray:
        """``C_l``: contribution of distance-``l`` vertices to ``||f||^2``."""
        return np.array([float(np.sum(self.f[lvl] ** 2)) for lvl in self.tree.levels])

    @property
    def norm2(self) -> float:
        return float(self.f @ self.f)


def _check_girth(G: WeightedGraph, k: int) -> None:
    if k > 0 and not girth_at_least(G, 2 * k + 2):
        raise CertificateError(f"radius {k} needs girth > {2 * k + 1}")


def test_function(G: WeightedGraph, r: int, k: int, check_girth: bool = True) -> TestFunction:
    if check_girth:
        _check_girth(G, k)
    tree = bfs_tree(G, r, k)
    f = np.zeros(G.n)
    f[r] = 1.0
    for level in tree.levels[1:]:
        for v in level:
            p = tree.parent[v]
            f[v] = math.sqrt(G.weight(p, v)) * f[p]
    return TestFunction(G, r, k, f, tree)


test_function.__test__ = False


def signed_test_function(tf: TestFunction) -> np.ndarray:
    fp = tf.f.copy()
    for ell, level in enumerate(tf.tree.levels):
        if ell % 2:
            fp[level] = -fp[level]
    return fp


def adjacency_form(G: WeightedGraph, f) -> float:
    """``f^T W f = 2 sum_{uv} w(u,v) f(u) f(v)``."""
    u, v, w = G.edge_array()
    f = np.asarray(f)
    return float(2.0 * np.sum(w * f[u] * f[v]))


def degree_form(G: WeightedGraph, f) -> float:
    f = np.asarray(f)
    return float(np.sum(degrees(G).weighted * f * f))


def _normalization_preconditions(G: WeightedGraph, d: float, tol: float = 1e-9) -> list[str]:
    deg = degrees(G)
    thr = 4 / math.sqrt(d)
    problems = []
    if abs(deg.max_weighted - 1.0) > tol:
        problems.append(f"max weighted degree is {deg.max_weighted}, not 1")
    if deg.min_weighted < 1 - thr - tol:
        problems.append(f"min weighted degree {deg.min_weighted} < 1 - 4/sqrt(d) = {1 - thr}")
    _, _, w = G.edge_array()
    if w.size and w.max() > thr + tol:
        problems.append(f"edge weight {w.max()} > 4/sqrt(d) = {thr}")
    return problems


def fnorm_bounds_check(tf: TestFunction, d: float) -> dict:
    """``(1 - 8/sqrt d)^k (k+1) <= ||f||^2 <= k+1`` and the per-level version
    ``C_l (1 - 8/sqrt d) <= C_{l+1} <= C_l``."""
    problems = _normalization_preconditions(tf.graph, d)
    if problems:
        raise CertificateError("; ".join(problems))
    _check_girth(tf.graph, tf.k)
    k, rel = tf.k, 1e-12
    shrink = 1 - 8 / math.sqrt(d)
    C = tf.level_sums()
    C = np.concatenate([C, np.zeros(k + 1 - C.size)])
    norm2 = tf.norm2
    lower = shrink ** k * (k + 1)
    upper = k + 1.0
    per_level = [
        bool(C[l] * shrink - rel <= C[l + 1] <= C[l] * (1 + rel) + rel) for l in range(k)
    ]
    return {
        "norm2": norm2, "lower": lower, "upper": upper,
        "lower_holds": norm2 >= lower - rel, "upper_holds": norm2 <= upper + rel,
        "level_sums": C.tolist(), "per_level_holds": per_level,
        "holds": norm2 >= lower - rel and norm2 <= upper + rel and all(per_level),
    }


def projection_ratio(f) -> float:
    """``||f_perp||^2 / ||f||^2`` for the projection off the ones vector."""
    f = np.asarray(f, dtype=float)
    fp = project_orth_ones(f)
    return float(fp @ fp) / float(f @ f)


def projection_bound_check(tf: TestFunction, d: float, g: float) -> dict:
    """Measured ``||f_perp||^2 / ||f||^2`` against ``1 - ||f||_0 / n`` (Cauchy-
    Schwarz on the support) and against the girth ball bound
    ``1 - 2 / (d/4 - 1)^((g-1)/2 - k)``."""
    G, k = tf.graph, tf.k
    if d < 12:
        raise CertificateError(f"projection bound needs d >= 12, got {d}")
    if degrees(G).min_combinatorial < d / 4:
        raise CertificateError("minimum combinatorial degree below d/4")
    if k > (g - 1) / 2:
        raise CertificateError(f"radius {k} exceeds (g-1)/2")
    if not girth_at_least(G, g):
        raise CertificateError(f"girth below the asserted {g}")
    measured = projection_ratio(tf.f)
    support = int(np.count_nonzero(tf.f))
    support_bound = 1 - support / G.n
    ball_bound = 1 - 2.0 / (d / 4 - 1) ** ((g - 1) / 2 - k)
    eps = 1e-12
    return {
        "measured": measured, "support": support, "support_bound": support_bound,
        "ball_bound": ball_bound,
        "holds": measured >= support_bound - eps and measured >= ball_bound - eps,
    }


@dataclass(frozen=True)
class AbCertificate:
    root: int
    k: int
    f: np.ndarray
    f_signed: np.ndarray
    fDf: float
    fWf: float
    fWf_signed: float
    fDf_signed: float
    fLf: float
    fLf_signed: float
    norm2: float
    norm2_perp: float
    norm2_signed_perp: float
    certified_lower_bound: float
    eigensolver_ratio: float | None
    extras: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "root": self.root, "k": self.k,
            "certified_lower_bound": self.certified_lower_bound,
            "eigensolver_ratio": self.eigensolver_ratio,
            "fWf": self.fWf, "fDf": self.fDf, "fWf_signed": self.fWf_signed,
            "fLf": self.fLf, "fLf_signed": self.fLf_signed,
            "norms": {"f": self.norm2, "f_perp": self.norm2_perp,
                      "f_signed_perp": self.norm2_signed_perp},
        }
        out.update(self.extras)
        return out


def _certificate_from(G: WeightedGraph, tf: TestFunction, with_eig: bool) -> AbCertificate:
    f = tf.f
    fp = signed_test_function(tf)
    fLf, fLf_s = quadratic_form(G, f), quadratic_form(G, fp)
    f_perp, fp_perp = project_orth_ones(f), project_orth_ones(fp)
    n_perp, n_perp_s = float(f_perp @ f_perp), float(fp_perp @ fp_perp)
    scale = tf.norm2
    if n_perp <= 1e-14 * scale or n_perp_s <= 1e-14 * scale:
        raise CertificateError("test vector is numerically parallel to the ones vector")
    if fLf <= 0:
        raise CertificateError("f^T L f vanishes: the ball is a connected component")
    bound = (fLf_s / n_perp_s) / (fLf / n_perp)
    ratio = lambda_ratio(G)["ratio"] if with_eig else None
    return AbCertificate(
        root=tf.root, k=tf.k, f=f, f_signed=fp,
        fDf=degree_form(G, f), fWf=adjacency_form(G, f),
        fWf_signed=adjacency_form(G, fp), fDf_signed=degree_form(G, fp),
        fLf=fLf, fLf_signed=fLf_s, norm2=tf.norm2, norm2_perp=n_perp,
        norm2_signed_perp=n_perp_s, certified_lower_bound=bound, eigensolver_ratio=ratio,
        extras={"closed_form_target": None},
    )


def ab_certificate(G: WeightedGraph, r: int, k: int, with_eig: bool = True,
                   check_girth: bool = True) -> AbCertificate:
    """Certified lower bound ``R(f'_perp) / R(f_perp) <= lambda_n / lambda_2``.

    Sound for any positive weights.  The value depends on the weight scale
    (``f`` carries products of ``sqrt w``), so callers normalize first.
    """
    tf = test_function(G, r, k, check_girth=check_girth)
    cert = _certificate_from(G, tf, with_eig)
    d = G.average_degree
    cert.extras["closed_form_target"] = 1 + 4 * k / ((k + 1) * math.sqrt(d)) if d > 0 else None
    return cert


def stationary_distribution(G: WeightedGraph) -> np.ndarray:
    if G.m == 0:
        raise GraphError("stationary distribution of an edgeless graph")
    w = degrees(G).weighted
    return w / math.fsum(w)


def root_adjacency_forms(G: WeightedGraph, k: int, roots=None) -> np.ndarray:
    """``f_r^T W f_r`` for each root, summing only over edges inside the ball."""
    roots = range(G.n) if roots is None else roots
    out = []
    for r in roots:
        tree = bfs_tree(G, r, k)
        vals = {r: 1.0}
        for level in tree.levels[1:]:
            for v in level:
                p = tree.parent[v]
                vals[v] = math.sqrt(G.weight(p, v)) * vals[p]
        s = 0.0
        for u, fu in vals.items():
            for v, w in G.adj[u]:
                fv = vals.get(v)
                if fv is not None:
                    s += w * fu * fv
        out.append(s)
    return np.array(out)


def lemma_lower_bound(d: float, k: int) -> float | None:
    """``2 (1 - 4/sqrt d)^k (k/sqrt d - 2k/d - 40 k^2 / d^(3/4))``; ``None``
    for ``d <= 16`` where the first factor is not positive."""
    if d <= 16:
        return None
    return 2 * (1 - 4 / math.sqrt(d)) ** k * (k / math.sqrt(d) - 2 * k / d - 40 * k**2 / d**0.75)


def best_root_certificate(G: WeightedGraph, k: int, with_eig: bool = True,
                          seed: int = 0) -> AbCertificate:
    """Certificate at the root maximizing ``f_r^T W f_r`` (lowest id on ties).

    All roots are scanned up to ``ALL_ROOTS_MAX_N`` vertices; beyond that
    ``SAMPLED_ROOTS`` roots are drawn from the stationary distribution.
    """
    _check_girth(G, k)
    pi = stationary_distribution(G)
    if G.n <= ALL_ROOTS_MAX_N:
        roots = np.arange(G.n)
        forms = root_adjacency_forms(G, k)
        pi_avg = float(np.dot(pi, forms))
    else:
        rng = np.random.default_rng(seed)
        roots = np.unique(rng.choice(G.n, size=SAMPLED_ROOTS, p=pi))
        forms = root_adjacency_forms(G, k, roots)
        pi_avg = float(np.mean(root_adjacency_forms(G, k, rng.choice(G.n, SAMPLED_ROOTS, p=pi))))
    best = int(roots[int(np.argmax(forms))])
    cert = ab_certificate(G, best, k, with_eig=with_eig, check_girth=False)
    d = G.average_degree
    cert.extras.update({
        "pi_average_fWf": pi_avg,
        "best_fWf": float(np.max(forms)),
        "lemma_target": 2 * k / math.sqrt(d),
        "lemma_lower_bound": lemma_lower_bound(d, k),
        "roots_evaluated": int(len(roots)),
    })
    return cert


# --- special-case claims ----------------------------------------------------

def claim_low_weighted_degree(G: WeightedGraph, d: float, tol: float = 1e-9) -> dict | None:
    """Explicit vectors for a graph with a vertex of weighted degree at most
    ``1 - 4/sqrt d`` (maximum weighted degree normalized to 1).

    ``f = e_u - (1 - e_u)/(n-1)`` is orthogonal to ones and bounds
    ``lambda_2``; ``h = e_v`` at a max-degree vertex bounds ``lambda_n``.
    """
    deg = degrees(G)
    if abs(deg.max_weighted - 1.0) > tol:
        raise CertificateError("graph must be normalized to maximum weighted degree 1")
    thr = 1 - 4 / math.sqrt(d)
    u = int(np.argmin(deg.weighted))
    if deg.weighted[u] > thr + tol:
        return None
    v = int(np.argmax(deg.weighted))
    n = G.n
    f = np.full(n, -1.0 / (n - 1))
    f[u] = 1.0
    h = np.zeros(n)
    h[v] = 1.0
    L = laplacian(G)
    rf, rh = rayleigh(L, f), rayleigh(L, h)
    return {
        "vertex_low": u, "vertex_max": v, "f": f, "h": h,
        "lambda2_upper": rf, "lambdan_lower": rh, "ratio_lower": rh / rf,
        "lambda2_claim": thr * (1 + 1 / (n - 1)),
        "slack_1_over_n": thr / (n - 1),
        "ratio_claim": 1 + 4 / math.sqrt(d),
    }


def claim_heavy_edge(G: WeightedGraph, d: float) -> dict | None:
    """``h = e_u - e_v`` on an edge heavier than ``4/sqrt d``.

    The exact quotient is ``(w(u) + w(v))/2 + w(u,v)``; ``holds`` reports
    whether it reaches ``1 + 4/sqrt d``.
    """
    u, v, w = G.edge_array()
    if w.size == 0:
        return None
    i = int(np.argmax(w))
    thr = 4 / math.sqrt(d)
    if w[i] <= thr:
        return None
    a, b = int(u[i]), int(v[i])
    h = np.zeros(G.n)
    h[a], h[b] = 1.0, -1.0
    q = rayleigh(laplacian(G), h)
    target = 1 + thr
    return {"edge": (a, b), "weight": float(w[i]), "h": h, "quotient": q,
            "claimed_bound": target, "holds": q >= target}


def claim_low_comb_degree_detect(G: WeightedGraph, d: float) -> int | None:
    """Lowest-id vertex of combinatorial degree below ``d/4``, if any."""
    comb = degrees(G).combinatorial
    low = np.flatnonzero(comb < d / 4)
    return int(low[0]) if low.size else None
