import math

import numpy as np
import pytest

from ramanujan_lab.certificates import (CertificateError, ab_certificate, adjacency_form,
                                        best_root_certificate, claim_heavy_edge,
                                        claim_low_comb_degree_detect, claim_low_weighted_degree,
                                        degree_form, fnorm_bounds_check, lemma_lower_bound,
                                        projection_bound_check, projection_ratio,
                                        root_adjacency_forms, signed_test_function,
                                        stationary_distribution, test_function)
from ramanujan_lab.graph import (WeightedGraph, degrees, gen_complete, gen_cycle, gen_gq_incidence,
                                 gen_hypercube, gen_path, gen_petersen, gen_random_regular,
                                 gen_star, girth, normalize_max_weighted_degree)
from ramanujan_lab.spectral import eig, lambda_ratio, laplacian, project_orth_ones


@pytest.fixture(scope="module")
def gq7():
    return normalize_max_weighted_degree(gen_gq_incidence(7))


# --- test functions -------------------------------------------------------------

def test_path_product_formula():
    G = WeightedGraph(3, ((0, 1, 0.3), (1, 2, 0.5)))
    tf = test_function(G, 0, 2)
    assert np.allclose(tf.f, [1, math.sqrt(0.3), math.sqrt(0.15)])
    assert np.allclose(signed_test_function(tf), [1, -math.sqrt(0.3), math.sqrt(0.15)])


def test_radius_zero_is_spike():
    G = gen_petersen()
    tf = test_function(G, 4, 0)
    assert tf.f.tolist() == [0, 0, 0, 0, 1, 0, 0, 0, 0, 0]
    assert tf.norm2 == 1
    assert np.array_equal(signed_test_function(tf), tf.f)


def test_cycle_half_weights_norm():
    tf = test_function(gen_cycle(8).scaled(0.5), 0, 2)
    assert tf.norm2 == pytest.approx(2.5)
    assert tf.norm2 <= 3


def test_sign_flip_preserves_norm():
    G = gen_random_regular(60, 3, 8, seed=2).with_weights(np.linspace(0.1, 1, 90))
    tf = test_function(G, 7, 3)
    assert np.linalg.norm(signed_test_function(tf)) == pytest.approx(np.linalg.norm(tf.f))


def test_girth_precondition():
    with pytest.raises(CertificateError):
        test_function(gen_cycle(5), 0, 2)
    test_function(gen_cycle(5), 0, 2, check_girth=False)


# --- norm and projection bounds ------------------------------------------------------

@pytest.mark.parametrize("d", [4, 8, 16])
def test_fnorm_regular_closed_form(d):
    # Q_d is d-regular with girth 4, enough for k=1
    G = normalize_max_weighted_degree(gen_hypercube(d)) if d <= 8 else None
    if G is None:
        G = normalize_max_weighted_degree(gen_random_regular(400, d, 4, seed=1))
    out = fnorm_bounds_check(test_function(G, 0, 1), d)
    assert out["holds"]
    # level sums for w = 1/d: C_0 = 1, C_1 = d * (1/d) = 1
    assert out["level_sums"] == pytest.approx([1.0, 1.0])


def test_fnorm_level_ratio_is_d_minus_one_over_d(gq7):
    out = fnorm_bounds_check(test_function(gq7, 0, 3), 8)
    C = np.array(out["level_sums"])
    assert np.allclose(C[2:] / C[1:-1], 7 / 8)
    assert out["holds"]


def test_fnorm_radius_zero_equalities():
    G = normalize_max_weighted_degree(gen_hypercube(4))
    out = fnorm_bounds_check(test_function(G, 0, 0), 16)
    assert out["norm2"] == out["lower"] == out["upper"] == 1


def test_fnorm_requires_normalization():
    with pytest.raises(CertificateError, match="max weighted degree"):
        fnorm_bounds_check(test_function(gen_cycle(8), 0, 1), 4)


def test_projection_examples():
    G = gen_petersen()
    assert projection_ratio(test_function(G, 0, 0).f) == pytest.approx(1 - 1 / 10)
    assert projection_ratio([1.0, -1.0, 0.0]) == pytest.approx(1.0)


def test_projection_bound_random_12_regular():
    G = normalize_max_weighted_degree(gen_random_regular(500, 12, 4, seed=6))
    tf = test_function(G, 3, 1)
    out = projection_bound_check(tf, 12, 4)
    assert out["measured"] >= 1 - 13 / 500
    assert out["holds"]


def test_projection_bound_preconditions():
    G = normalize_max_weighted_degree(gen_random_regular(100, 12, 3, seed=6))
    tf = test_function(G, 0, 1, check_girth=False)
    with pytest.raises(CertificateError):
        projection_bound_check(tf, 8, 3)
    with pytest.raises(CertificateError):
        projection_bound_check(tf, 12, 2)


# --- certificates ----------------------------------------------------------------------

def test_single_edge_certificate():
    G = WeightedGraph(2, ((0, 1, 1.0),))
    c = ab_certificate(G, 0, 0)
    assert c.certified_lower_bound == pytest.approx(1.0)
    assert c.eigensolver_ratio == pytest.approx(1.0)


@pytest.mark.parametrize("r", range(8))
def test_cycle_certificate_below_ratio(r):
    G = gen_cycle(8).scaled(0.5)
    c = ab_certificate(G, r, 2)
    assert c.certified_lower_bound <= c.eigensolver_ratio + 1e-9


def _closed_form_regular(d, k, n):
    """Certificate on a d-regular graph with weights 1/d and girth > 2k+1,
    computed level by level: level l has d (d-1)^(l-1) vertices with value
    d^(-l/2)."""
    sizes = [1] + [d * (d - 1) ** (l - 1) for l in range(1, k + 1)]
    vals = [d ** (-l / 2) for l in range(k + 1)]
    norm2 = sum(s * v * v for s, v in zip(sizes, vals))
    fwf = 2 * sum(sizes[l] * (1 / d) * vals[l - 1] * vals[l] for l in range(1, k + 1))
    s_plus = sum(s * v for s, v in zip(sizes, vals))
    s_minus = sum((-1) ** l * s * v for l, (s, v) in enumerate(zip(sizes, vals)))
    # D = I after normalization, so f^T L f = ||f||^2 - f^T W f
    num = (norm2 + fwf) / (norm2 - s_minus**2 / n)
    den = (norm2 - fwf) / (norm2 - s_plus**2 / n)
    return num / den, fwf, sizes, vals


@pytest.mark.parametrize("G, d, k", [
    (gen_gq_incidence(2), 3, 3),
    (gen_gq_incidence(3), 4, 3),
    (gen_random_regular(400, 4, 6, seed=3), 4, 2),
    (gen_cycle(20), 2, 4),
], ids=["tutte-coxeter", "gq3", "rr4", "c20"])
def test_certificate_matches_level_closed_form(G, d, k):
    H = normalize_max_weighted_degree(G)
    c = ab_certificate(H, 0, k)
    want, fwf, _, _ = _closed_form_regular(d, k, H.n)
    assert c.certified_lower_bound == pytest.approx(want, abs=1e-9)
    assert c.fWf == pytest.approx(fwf, abs=1e-12)
    # (2 / sqrt d) sum C_l with C_l = ((d-1)/d)^(l-1)
    assert fwf == pytest.approx(2 / math.sqrt(d) * sum(((d - 1) / d) ** (l - 1)
                                                      for l in range(1, k + 1)))


@pytest.mark.parametrize("G, k", [(gen_cycle(11), 3), (gen_hypercube(4), 1),
                                  (gen_gq_incidence(2), 3)], ids=["c11", "q4", "tc"])
def test_vertex_transitive_roots_agree(G, k):
    bounds = [ab_certificate(G, r, k, with_eig=False).certified_lower_bound for r in range(G.n)]
    assert np.ptp(bounds) < 1e-10


def test_radius_zero_adjacency_form_vanishes():
    assert np.allclose(root_adjacency_forms(gen_petersen(), 0), 0)


def test_antisymmetry():
    rng = np.random.default_rng(8)
    G = gen_random_regular(120, 3, 8, seed=8)
    G = normalize_max_weighted_degree(G.with_weights(rng.uniform(0.1, 1, G.m)))
    for r in range(0, 120, 11):
        c = ab_certificate(G, r, 3, with_eig=False)
        assert c.fWf_signed == pytest.approx(-c.fWf, abs=1e-10)
        assert c.fDf_signed == pytest.approx(c.fDf, abs=1e-10)


def test_forms_consistent_with_laplacian():
    G = gen_petersen().with_weights(np.linspace(0.2, 1.2, 15))
    f = np.arange(10.0)
    assert degree_form(G, f) - adjacency_form(G, f) == pytest.approx(f @ laplacian(G) @ f)


def _soundness_graphs(rng):
    gens = [gen_cycle(int(rng.integers(3, 30))), gen_path(int(rng.integers(2, 20))),
            gen_star(int(rng.integers(2, 12))), gen_complete(int(rng.integers(2, 9))),
            gen_hypercube(int(rng.integers(1, 5))), gen_petersen(),
            gen_random_regular(40, 3, int(rng.integers(3, 7)), seed=int(rng.integers(1000)))]
    G = gens[int(rng.integers(len(gens)))]
    if rng.random() < 0.7:
        G = G.with_weights(rng.uniform(0.05, 3.0, G.m))
    return G


def test_soundness_randomized():
    rng = np.random.default_rng(2026)
    checked = 0
    while checked < 120:
        G = _soundness_graphs(rng)
        g = girth(G)
        kmax = 4 if g == math.inf else int((g - 2) // 2)
        k = int(rng.integers(0, kmax + 1))
        r = int(rng.integers(G.n))
        try:
            c = ab_certificate(G, r, k)
        except CertificateError:
            continue  # ball covers a component or f is parallel to ones
        assert c.certified_lower_bound <= c.eigensolver_ratio + 1e-9
        checked += 1


@pytest.mark.parametrize("c", [0.01, 0.3, 1.0, 7.5, 100.0])
def test_certificate_sound_at_every_scale(c):
    # f depends on the scale through sqrt(w) products; the ratio does not
    G = gen_gq_incidence(2).with_weights(np.linspace(0.3, 2, 45)).scaled(c)
    cert = ab_certificate(G, 0, 3)
    assert cert.certified_lower_bound <= cert.eigensolver_ratio + 1e-9


# --- roots and stationarity -------------------------------------------------------

def test_stationary_examples():
    assert np.allclose(stationary_distribution(gen_hypercube(3)), 1 / 8)
    assert np.allclose(stationary_distribution(gen_path(3)), [0.25, 0.5, 0.25])
    star = gen_star(6).scaled(1 / 6)
    assert stationary_distribution(star)[0] == pytest.approx(0.5)


def test_best_root_random_graph(gq7):
    c = best_root_certificate(gq7, 3)
    assert c.extras["best_fWf"] >= c.extras["pi_average_fWf"] - 1e-12
    assert c.extras["lemma_lower_bound"] is None  # vacuous for d <= 16
    assert c.certified_lower_bound <= c.eigensolver_ratio + 1e-9


def test_lemma_lower_bound_domain():
    assert lemma_lower_bound(8, 2) is None
    assert lemma_lower_bound(10**8, 1) > 0


def test_best_root_on_weighted_graph_dominates_average():
    rng = np.random.default_rng(4)
    G = gen_random_regular(300, 4, 6, seed=4)
    G = normalize_max_weighted_degree(G.with_weights(rng.uniform(0.2, 1, G.m)))
    forms = root_adjacency_forms(G, 2)
    c = best_root_certificate(G, 2, with_eig=False)
    assert c.root == int(np.argmax(forms))
    assert c.extras["best_fWf"] == pytest.approx(forms.max())


# --- special-case claims -------------------------------------------------------------

def _low_degree_instance():
    # K_5 where vertex 0 has weighted degree 1/2 and all others have 1
    w0 = 0.125
    other = (1 - w0) / 3
    edges = [(0, v, w0) for v in range(1, 5)]
    edges += [(u, v, other) for u in range(1, 5) for v in range(u + 1, 5)]
    return WeightedGraph(5, tuple(edges))


def test_claim_low_weighted_degree():
    G = _low_degree_instance()
    out = claim_low_weighted_degree(G, 64)
    assert out["vertex_low"] == 0
    vals = eig(laplacian(G)).values
    assert vals[1] <= out["lambda2_upper"] + 1e-8
    assert out["lambda2_upper"] <= out["lambda2_claim"] + 1e-12
    assert out["lambdan_lower"] >= 1 - 1e-12
    assert vals[-1] >= out["lambdan_lower"] - 1e-8
    assert np.dot(out["f"], np.ones(5)) == pytest.approx(0, abs=1e-14)


def test_claim_low_weighted_degree_absent_on_regular():
    assert claim_low_weighted_degree(normalize_max_weighted_degree(gen_petersen()), 64) is None


def test_claim_low_weighted_degree_requires_normalized():
    with pytest.raises(CertificateError):
        claim_low_weighted_degree(gen_petersen(), 64)


def test_claim_heavy_edge_single_edge():
    out = claim_heavy_edge(WeightedGraph(2, ((0, 1, 1.0),)), 25)
    assert out["quotient"] == pytest.approx(2.0)
    assert out["holds"]


def test_claim_heavy_edge_quotient_formula():
    out = claim_heavy_edge(WeightedGraph(2, ((0, 1, 0.9),)), 25)
    assert out["quotient"] == pytest.approx(1.8)
    # path 0-1-2 with weights (1/4, 3/4): heavy edge (1, 2) for d = 36
    G = WeightedGraph(3, ((0, 1, 0.25), (1, 2, 0.75)))
    out = claim_heavy_edge(G, 36)
    (a, b), w = out["edge"], out["weight"]
    wd = degrees(G).weighted
    assert (a, b) == (1, 2)
    assert out["quotient"] == pytest.approx((wd[a] + wd[b]) / 2 + w)
    # 1.625 < 1 + 4/6: the quotient need not reach the claimed bound
    assert out["quotient"] == pytest.approx(1.625)
    assert not out["holds"]
    assert eig(laplacian(G)).values[-1] >= out["quotient"] - 1e-12


def test_claim_heavy_edge_absent():
    assert claim_heavy_edge(normalize_max_weighted_degree(gen_cycle(10)), 16) is None


def test_claim_low_comb_degree():
    assert claim_low_comb_degree_detect(gen_hypercube(3), 3) is None
    assert claim_low_comb_degree_detect(gen_star(9), 8) == 1
    assert claim_low_comb_degree_detect(gen_random_regular(50, 3, 3, seed=0), 8) is None


def test_eigensolver_ratio_matches_spectral_module(gq7):
    c = ab_certificate(gq7, 0, 1)
    assert c.eigensolver_ratio == pytest.approx(lambda_ratio(gq7)["ratio"])


def test_projection_matches_direct():
    f = np.array([3.0, 0.0, -1.0, 2.0])
    fp = project_orth_ones(f)
    assert projection_ratio(f) == pytest.approx(fp @ fp / (f @ f))
