"""Online vector sparsification: adversaries, players and the game loop.

Each round the adversary shows an isotropic menu (columns of an ``n x m``
matrix ``V`` with ``V V^T = I``); the player answers with an index and a
nonnegative scaling, and ``A <- A + s v v^T``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .polynomials import RealRootedPoly, kappa, one_minus_alpha_D, product_transform
from .spectral import eig

EXACT_TRACKING_MAX_N = 16


class InfeasibleStepError(AssertionError):
    """No menu vector satisfies the barrier conditions."""


@dataclass
class GameState:
    n: int
    T: int
    A: np.ndarray
    round: int = 0
    history: list = field(default_factory=list)
    poly: RealRootedPoly | None = None

    @classmethod
    def initial(cls, n: int, T: int, track_poly: bool = True) -> "GameState":
        poly = RealRootedPoly.monomial(n, exact=n <= EXACT_TRACKING_MAX_N) if track_poly else None
        return cls(n=n, T=T, A=np.zeros((n, n)), poly=poly)

    @property
    def scalings(self) -> list[float]:
        return [s for _, _, s in self.history]

    @property
    def S(self) -> float:
        """Running ``sum_t s_t / n``."""
        return math.fsum(self.scalings) / self.n

    def apply(self, v: np.ndarray, index: int, s: float) -> None:
        self.A = self.A + s * np.outer(v, v)
        self.round += 1
        self.history.append((self.round, index, s))
        if self.poly is not None:
            alpha = Fraction(s) / self.n if self.poly.exact else s / self.n
            self.poly = one_minus_alpha_D(self.poly, alpha)


# --- adversaries ------------------------------------------------------------

def hadamard(n: int) -> np.ndarray:
    """Sylvester Hadamard matrix scaled to be orthogonal (entries ``+-1/sqrt(n)``)."""
    if n < 1 or n & (n - 1):
        raise ValueError(f"Sylvester construction needs a power of 2, got {n}")
    H = np.ones((1, 1))
    while H.shape[0] < n:
        H = np.block([[H, H], [H, -H]])
    return H / math.sqrt(n)


def isotropy_error(V: np.ndarray) -> float:
    """Frobenius distance of ``sum_i v_i v_i^T`` from the identity."""
    return float(np.linalg.norm(V @ V.T - np.eye(V.shape[0])))


class HadamardAdversary:
    """Menu ``U h_1, ..., U h_n`` with ``U`` an eigenbasis of the current matrix.

    Every menu vector has squared overlap ``1/n`` with every eigenvector, so
    the next characteristic polynomial depends only on the scaling.
    """

    def __init__(self, n: int):
        self.H = hadamard(n)

    def __call__(self, state: GameState) -> np.ndarray:
        U = eig(state.A, want_vectors=True).vectors
        return U @ self.H


def hadamard_adversary(state: GameState) -> np.ndarray:
    return HadamardAdversary(state.n)(state)


class StaticMenu:
    """The same isotropic set every round (graph sparsification)."""

    def __init__(self, V: np.ndarray):
        self.V = np.asarray(V, dtype=float)

    def __call__(self, state: GameState) -> np.ndarray:
        return self.V


# --- players ----------------------------------------------------------------

def bss_parameters(beta: float, n: int) -> dict:
    """Barrier schedule for ``T = beta * n`` rounds in dimension ``n``.

    The final barriers satisfy ``(u0 + T dU) / (l0 + T dL) = kappa(2 beta)``.
    """
    if beta <= 1:
        raise ValueError(f"need beta = T/n > 1, got {beta}")
    sb = math.sqrt(beta)
    return {
        "delta_L": 1.0,
        "delta_U": (sb + 1) / (sb - 1),
        "l0": -n * sb,
        "u0": n * (beta + sb) / (sb - 1),
    }


class BssPlayer:
    """Twice-Ramanujan barrier strategy.

    Keeps ``l < lambda_min(A) <= lambda_max(A) < u`` and, each round, shifts
    both barriers, picks the menu vector with the largest
    ``Lower(v) - Upper(v)`` and adds it with ``s = 2 / (Upper + Lower)``, so
    neither potential ``Tr (uI - A)^-1`` nor ``Tr (A - lI)^-1`` increases.
    """

    name = "bss"

    def __init__(self, tie_tol: float = 1e-12, margin_tol: float = 1e-9):
        self.tie_tol = tie_tol
        self.margin_tol = margin_tol

    def reset(self, n: int, T: int) -> None:
        p = bss_parameters(T / n, n)
        self.n, self.T = n, T
        self.dU, self.dL = p["delta_U"], p["delta_L"]
        self.u, self.l = p["u0"], p["l0"]
        self.log: list[dict] = []

    def target_kappa(self) -> float:
        return kappa(2 * self.T / self.n)

    def choose(self, state: GameState, menu: np.ndarray) -> tuple[int, float]:
        A, n = state.A, state.n
        I = np.eye(n)
        u_new, l_new = self.u + self.dU, self.l + self.dL
        Ru_old = np.linalg.inv(self.u * I - A)
        Rl_old = np.linalg.inv(A - self.l * I)
        Ru = np.linalg.inv(u_new * I - A)
        Rl = np.linalg.inv(A - l_new * I)
        phi_u_old, phi_l_old = np.trace(Ru_old), np.trace(Rl_old)
        phi_u, phi_l = np.trace(Ru), np.trace(Rl)

        RuV, RlV = Ru @ menu, Rl @ menu
        q1u = np.einsum("ij,ij->j", menu, RuV)
        q2u = np.einsum("ij,ij->j", RuV, RuV)
        q1l = np.einsum("ij,ij->j", menu, RlV)
        q2l = np.einsum("ij,ij->j", RlV, RlV)
        upper = q2u / (phi_u_old - phi_u) + q1u
        lower = q2l / (phi_l - phi_l_old) - q1l
        margin = lower - upper
        best = float(np.max(margin))
        scale = float(np.max(np.abs(lower)))
        i = int(np.flatnonzero(margin >= best - self.tie_tol * max(scale, 1.0))[0])
        if margin[i] < -self.margin_tol * max(scale, 1.0):
            raise InfeasibleStepError(
                f"round {state.round + 1}: best margin {margin[i]:.3e} (Upper {upper[i]:.6g},"
                f" Lower {lower[i]:.6g})"
            )
        s = 2.0 / (upper[i] + lower[i])

        A_new = A + s * np.outer(menu[:, i], menu[:, i])
        vals = eig(A_new).values
        new_phi_u = float(np.sum(1.0 / (u_new - vals)))
        new_phi_l = float(np.sum(1.0 / (vals - l_new)))
        self.log.append({
            "round": state.round + 1, "index": i, "s": float(s), "margin": float(margin[i]),
            "upper": float(upper[i]), "lower": float(lower[i]),
            "u": u_new, "l": l_new,
            "lambda_min": float(vals[0]), "lambda_max": float(vals[-1]),
            "phi_u_before": float(phi_u_old), "phi_u_after": new_phi_u,
            "phi_l_before": float(phi_l_old), "phi_l_after": new_phi_l,
        })
        self.u, self.l = u_new, l_new
        return i, float(s)

    def barrier_safety(self, tol: float = 1e-10) -> dict:
        """Per-round checks: spectrum strictly inside the barriers and
        potentials nonincreasing."""
        inside = all(e["l"] < e["lambda_min"] and e["lambda_max"] < e["u"] for e in self.log)
        mono_u = all(e["phi_u_after"] <= e["phi_u_before"] + tol for e in self.log)
        mono_l = all(e["phi_l_after"] <= e["phi_l_before"] + tol for e in self.log)
        margins = [e["margin"] for e in self.log]
        return {"inside_barriers": inside, "upper_potential_nonincreasing": mono_u,
                "lower_potential_nonincreasing": mono_l,
                "min_margin": min(margins) if margins else None,
                "ok": inside and mono_u and mono_l}


class UniformPlayer:
    name = "uniform"

    def reset(self, n: int, T: int) -> None:
        pass

    def choose(self, state: GameState, menu: np.ndarray) -> tuple[int, float]:
        return 0, 1.0


class RandomPlayer:
    def __init__(self, seed: int = 0, scalings: tuple[float, ...] = (1.0,)):
        self.seed = seed
        self.scalings = tuple(scalings)
        self.name = f"random({seed})"

    def reset(self, n: int, T: int) -> None:
        self.rng = np.random.default_rng(self.seed)

    def choose(self, state: GameState, menu: np.ndarray) -> tuple[int, float]:
        i = int(self.rng.integers(menu.shape[1]))
        s = float(self.scalings[int(self.rng.integers(len(self.scalings)))])
        return i, s


def pseudo_condition(vals: np.ndarray, tol: float = 1e-9) -> float:
    """``lambda_max / lambda_min`` over the eigenvalues that are numerically nonzero."""
    top = float(vals[-1])
    if top <= 0:
        return math.inf
    nz = vals[vals > tol * top]
    return top / float(nz[0])


class GreedyConditionPlayer:
    """Try every menu vector with every scaling in a small grid and keep the
    move with the smallest (pseudo-)condition number afterwards."""

    name = "greedy"

    def __init__(self, grid: tuple[float, ...] = (0.5, 1.0, 2.0)):
        self.grid = tuple(grid)

    def reset(self, n: int, T: int) -> None:
        pass

    def choose(self, state: GameState, menu: np.ndarray) -> tuple[int, float]:
        best = (math.inf, 0, self.grid[0])
        for i in range(menu.shape[1]):
            v = menu[:, i]
            outer = np.outer(v, v)
            for s in self.grid:
                vals = eig(state.A + s * outer).values
                c = pseudo_condition(vals)
                if c < best[0] - 1e-12:
                    best = (c, i, s)
        return best[1], float(best[2])


class SweepPlayer:
    """Take menu entries in order with unit scaling (identity sparsifier when
    the menu is static and ``T`` equals its size)."""

    name = "sweep"

    def reset(self, n: int, T: int) -> None:
        pass

    def choose(self, state: GameState, menu: np.ndarray) -> tuple[int, float]:
        return state.round % menu.shape[1], 1.0


def make_player(name: str, seed: int = 0):
    if name == "bss":
        return BssPlayer()
    if name == "uniform":
        return UniformPlayer()
    if name == "greedy":
        return GreedyConditionPlayer()
    if name == "random":
        return RandomPlayer(seed)
    if name == "sweep":
        return SweepPlayer()
    raise ValueError(f"unknown player {name!r}")


# --- the game ---------------------------------------------------------------

@dataclass(frozen=True)
class GameResult:
    n: int
    T: int
    player: str
    eigenvalues: np.ndarray
    condition: float
    scalings: tuple[float, ...]
    indices: tuple[int, ...]
    poly: RealRootedPoly | None
    A: np.ndarray
    max_isotropy_error: float
    margins: tuple[float, ...] = ()
    barrier: dict | None = None

    @property
    def S(self) -> float:
        return math.fsum(self.scalings) / self.n

    @property
    def singular(self) -> bool:
        return not math.isfinite(self.condition)

    def to_dict(self) -> dict:
        return {
            "n": self.n, "T": self.T, "player": self.player,
            "condition": None if self.singular else self.condition,
            "singular": self.singular,
            "eigenvalues": self.eigenvalues.tolist(),
            "scalings": list(self.scalings), "indices": list(self.indices),
            "S": self.S, "margins": list(self.margins),
            "max_isotropy_error": self.max_isotropy_error,
            "barrier": self.barrier,
        }


def condition_number(vals: np.ndarray, tol: float = 1e-9) -> float:
    top = float(vals[-1])
    if top <= 0 or vals[0] <= tol * top:
        return math.inf
    return top / float(vals[0])


def play_game(player, adversary, n: int, T: int, track_poly: bool = True) -> GameResult:
    if T < 1:
        raise ValueError("need at least one round")
    state = GameState.initial(n, T, track_poly=track_poly)
    player.reset(n, T)
    iso = 0.0
    for _ in range(T):
        menu = adversary(state)
        iso = max(iso, isotropy_error(menu))
        i, s = player.choose(state, menu)
        if s < 0:
            raise ValueError(f"player {player.name} returned a negative scaling {s}")
        state.apply(menu[:, i], i, s)
    vals = eig(state.A).values
    margins, barrier = (), None
    if isinstance(player, BssPlayer):
        margins = tuple(e["margin"] for e in player.log)
        barrier = player.barrier_safety()
    return GameResult(
        n=n, T=T, player=player.name, eigenvalues=vals, condition=condition_number(vals),
        scalings=tuple(state.scalings), indices=tuple(i for _, i, _ in state.history),
        poly=state.poly, A=state.A, max_isotropy_error=iso, margins=margins, barrier=barrier,
    )


def charpoly_coefficients(A: np.ndarray) -> np.ndarray:
    """Ascending coefficients of ``det(xI - A)`` from the eigenvalues."""
    vals = eig(A).values
    return np.poly(vals)[::-1]


def charpoly_trace_check(result: GameResult, tol: float = 1e-8) -> dict:
    """``det(xI - A_T)`` against ``prod_t (1 - (s_t/n) D) x^n``.

    Per-coefficient relative error; a coefficient that is exactly zero in
    the exact product is compared against ``C(n, i) rho^i`` where ``rho`` is
    the spectral radius (the size of that coefficient for a generic spectrum).
    """
    n = result.n
    expected = product_transform(n, result.scalings, exact=n <= EXACT_TRACKING_MAX_N)
    e = expected.as_float()
    c = charpoly_coefficients(result.A)
    rho = max(float(np.max(np.abs(result.eigenvalues))), 1.0)
    deg = np.arange(n + 1)
    floor = np.array([math.comb(n, n - i) for i in deg], dtype=float) * rho ** (n - deg)
    denom = np.where(e != 0, np.abs(e), floor)
    rel = np.abs(c - e) / denom
    return {"ok": bool(np.max(rel) <= tol), "max_rel_error": float(np.max(rel))}
