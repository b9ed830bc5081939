import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ramanujan_lab.game import (BssPlayer, GameState, GreedyConditionPlayer, HadamardAdversary,
                                InfeasibleStepError, RandomPlayer, StaticMenu, SweepPlayer,
                                UniformPlayer, bss_parameters, charpoly_coefficients,
                                charpoly_trace_check, condition_number, hadamard,
                                isotropy_error, make_player, play_game)
from ramanujan_lab.polynomials import kappa, laguerre_roots, product_transform, real_roots
from ramanujan_lab.spectral import eig


class FixedScalings:
    """Replays a scaling sequence, always taking menu entry ``index``."""

    def __init__(self, scalings, index=0):
        self.scalings = list(scalings)
        self.index = index
        self.name = f"fixed[{index}]"

    def reset(self, n, T):
        pass

    def choose(self, state, menu):
        return self.index % menu.shape[1], self.scalings[state.round]


# --- Hadamard adversary ---------------------------------------------------------

def test_hadamard_small():
    assert hadamard(1).tolist() == [[1.0]]
    assert np.allclose(hadamard(2), np.array([[1, 1], [1, -1]]) / math.sqrt(2))


@pytest.mark.parametrize("n", [4, 8, 16, 32])
def test_hadamard_orthogonal(n):
    H = hadamard(n)
    assert np.allclose(H @ H.T, np.eye(n), atol=1e-12)
    assert np.allclose(np.abs(H), 1 / math.sqrt(n))


def test_hadamard_rejects_non_power_of_two():
    with pytest.raises(ValueError):
        hadamard(6)


def test_adversary_first_menu_is_hadamard_columns():
    state = GameState.initial(4, 8)
    menu = HadamardAdversary(4)(state)
    # eigenbasis of the zero matrix is a signed permutation of I
    assert np.allclose(np.abs(menu), 0.5)
    assert isotropy_error(menu) < 1e-12


def test_adversary_menu_isotropic_with_flat_overlaps():
    rng = np.random.default_rng(0)
    n = 8
    state = GameState.initial(n, 20, track_poly=False)
    adv = HadamardAdversary(n)
    for _ in range(12):
        menu = adv(state)
        assert isotropy_error(menu) <= 1e-9
        U = eig(state.A, want_vectors=True).vectors
        assert np.allclose(np.abs(U.T @ menu), 1 / math.sqrt(n), atol=1e-9)
        state.apply(menu[:, int(rng.integers(n))], 0, float(rng.uniform(0, 2)))


# --- BSS player -------------------------------------------------------------------

@pytest.mark.parametrize("beta", [2, 4, 9, 16])
def test_parameter_identity(beta):
    n = 8
    p = bss_parameters(beta, n)
    T = beta * n
    ratio = (p["u0"] + T * p["delta_U"]) / (p["l0"] + T * p["delta_L"])
    assert ratio == pytest.approx(((math.sqrt(beta) + 1) / (math.sqrt(beta) - 1)) ** 2, abs=1e-12)
    assert ratio == pytest.approx(kappa(2 * beta), abs=1e-12)


def test_parameters_require_beta_above_one():
    with pytest.raises(ValueError):
        bss_parameters(1, 4)


def test_bss_first_round_ties_break_to_zero():
    p = BssPlayer()
    p.reset(4, 16)
    state = GameState.initial(4, 16)
    i, s = p.choose(state, HadamardAdversary(4)(state))
    assert i == 0 and s > 0


@pytest.mark.parametrize("n, T", [(2, 8), (4, 16), (8, 32), (16, 64)])
def test_bss_condition_and_barrier_safety(n, T):
    p = BssPlayer()
    res = play_game(p, HadamardAdversary(n), n, T)
    assert res.condition <= 9 + 1e-6
    assert res.barrier["ok"]
    assert min(res.margins) >= 0
    for e in p.log:
        assert e["l"] < e["lambda_min"] and e["lambda_max"] < e["u"]
        assert e["phi_u_after"] <= e["phi_u_before"] + 1e-10
        assert e["phi_l_after"] <= e["phi_l_before"] + 1e-10


@pytest.mark.parametrize("d", [5, 12, 20])
def test_bss_respects_kappa_for_other_degrees(d):
    n = 8
    res = play_game(BssPlayer(), HadamardAdversary(n), n, math.ceil(d * n / 2))
    assert res.condition <= kappa(d) + 1e-6


def test_bss_infeasible_step_is_reported():
    # a menu that never touches the second coordinate cannot lift lambda_min
    with pytest.raises(InfeasibleStepError, match="round 2"):
        play_game(BssPlayer(), StaticMenu(np.array([[1.0], [0.0]])), 2, 8)


# --- baseline players -------------------------------------------------------------

def test_uniform_player_total_scaling():
    res = play_game(UniformPlayer(), HadamardAdversary(4), 4, 16)
    assert res.S == 4.0


def test_uniform_player_reaches_laguerre_ratio():
    res = play_game(UniformPlayer(), HadamardAdversary(8), 8, 32)
    lr = laguerre_roots(8, 32, res.S)
    assert res.condition == pytest.approx(lr[-1] / lr[0], rel=1e-8)


@pytest.mark.parametrize("player", [GreedyConditionPlayer(), RandomPlayer(3, (0.5, 1, 2)),
                                    UniformPlayer()], ids=lambda p: p.name)
@pytest.mark.parametrize("n", [2, 4, 8])
def test_condition_at_least_laguerre_ratio(player, n):
    T = 4 * n
    res = play_game(player, HadamardAdversary(n), n, T)
    lr = laguerre_roots(n, T, res.S)
    assert res.condition >= lr[-1] / lr[0] - 1e-6


def test_random_player_reproducible():
    a = play_game(RandomPlayer(7, (0.5, 1.0)), HadamardAdversary(4), 4, 12)
    b = play_game(RandomPlayer(7, (0.5, 1.0)), HadamardAdversary(4), 4, 12)
    assert a.indices == b.indices and a.scalings == b.scalings
    assert np.array_equal(a.eigenvalues, b.eigenvalues)


def test_short_game_is_singular():
    res = play_game(UniformPlayer(), HadamardAdversary(8), 8, 5)
    assert res.condition == math.inf and res.singular
    assert res.to_dict()["condition"] is None


def test_make_player():
    for name in ("bss", "uniform", "greedy", "random", "sweep"):
        assert make_player(name).choose
    with pytest.raises(ValueError):
        make_player("oracle")


def test_negative_scaling_rejected():
    with pytest.raises(ValueError):
        play_game(FixedScalings([-1.0]), HadamardAdversary(2), 2, 1)


# --- characteristic polynomial ----------------------------------------------------

def test_one_round_rank_one_charpoly():
    res = play_game(FixedScalings([1.0]), HadamardAdversary(4), 4, 1)
    assert res.poly.coeffs == (0, 0, 0, -1, 1)
    assert np.allclose(charpoly_coefficients(res.A), [0, 0, 0, -1, 1], atol=1e-12)


def test_zero_scalings_give_monomial():
    res = play_game(FixedScalings([0.0] * 5), HadamardAdversary(4), 4, 5)
    assert res.poly.coeffs == (0, 0, 0, 0, 1)


def test_three_unit_scalings_match_eigenvalues():
    # n = 4 is the nearest Hadamard size to the n = 3 example
    res = play_game(FixedScalings([1, 1, 1]), HadamardAdversary(4), 4, 3)
    assert np.allclose(real_roots(product_transform(4, [1, 1, 1])), res.eigenvalues, atol=1e-9)


def test_different_players_same_scalings_same_polynomial():
    s = [0.5, 2.0, 1.0, 1.5, 0.25, 1.0, 3.0, 0.75]
    a = play_game(FixedScalings(s, 0), HadamardAdversary(4), 4, len(s))
    b = play_game(FixedScalings(s, 3), HadamardAdversary(4), 4, len(s))
    assert a.poly.coeffs == b.poly.coeffs
    assert np.allclose(a.eigenvalues, b.eigenvalues, atol=1e-10)


@given(st.sampled_from([2, 4, 8]),
       st.lists(st.sampled_from([0.0, 0.25, 0.5, 1.0, 2.0, 3.5]), min_size=1, max_size=24),
       st.integers(0, 7))
def test_charpoly_invariance(n, scalings, index):
    res = play_game(FixedScalings(scalings, index), HadamardAdversary(n), n, len(scalings))
    chk = charpoly_trace_check(res)
    assert chk["ok"], chk
    assert res.max_isotropy_error <= 1e-9


@pytest.mark.parametrize("n", [2, 4, 8, 16])
def test_charpoly_roots_match_eigenvalues(n):
    res = play_game(RandomPlayer(n, (0.5, 1.0, 2.0)), HadamardAdversary(n), n, 3 * n)
    assert np.allclose(real_roots(res.poly), res.eigenvalues, atol=1e-7)


def test_static_menu_and_sweep():
    V = np.eye(3)
    res = play_game(SweepPlayer(), StaticMenu(V), 3, 3)
    assert np.allclose(res.A, np.eye(3))
    assert condition_number(res.eigenvalues) == pytest.approx(1.0)
