"""Reproducible experiment runs and the invariant validation suite.

A run is described by an :class:`ExperimentSpec`; :func:`run` validates it,
dispatches to the library, and returns a :class:`Report` whose records are a
deterministic function of the spec (the timestamp lives in the header only).
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .certificates import (ab_certificate, best_root_certificate, root_adjacency_forms,
                           stationary_distribution)
from .game import (BssPlayer, GreedyConditionPlayer, HadamardAdversary, RandomPlayer,
                   UniformPlayer, bss_parameters, charpoly_trace_check, make_player, play_game)
from .graph import (GraphError, WeightedGraph, _json_default, gen_complete, gen_cycle,
                    gen_gq_incidence, gen_hypercube, gen_petersen, gen_random_regular, girth, load_graph,
                    normalize_max_weighted_degree, save_graph)
from .polynomials import (RealRootedPoly, kappa, laguerre_poly, laguerre_roots,
                          majorization_slack, mp_edges, one_minus_alpha_D, product_transform,
                          real_roots)
from .sparsifier import edge_vectors, sparsify, verify_sparsifier
from .spectral import eig, laplacian
from .walks import edge_stationary_mean, walk_stats

KINDS = ("ab-certify", "game", "sparsify", "laguerre", "validate")
WORKERS_ENV = "RAMANUJAN_LAB_WORKERS"


class SpecError(ValueError):
    """The experiment spec is invalid; raised before any computation."""


@dataclass
class ExperimentSpec:
    kind: str
    params: dict = field(default_factory=dict)
    seed: int = 0
    repetitions: int = 1
    json_out: str | None = None
    csv_out: str | None = None


@dataclass
class Report:
    header: dict
    experiment: dict
    records: list
    summary: dict
    passed: bool | None = None

    def to_dict(self) -> dict:
        return {"header": self.header, "experiment": self.experiment, "records": self.records,
                "summary": self.summary, "passed": self.passed}

    def csv_body(self) -> str:
        if not self.records:
            return ""
        flat = [{k: v for k, v in r.items() if not isinstance(v, (list, dict))} for r in self.records]
        cols = list(dict.fromkeys(k for r in flat for k in r))
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        w.writerows(flat)
        return buf.getvalue()


def _rep_seeds(seed: int, repetitions: int) -> list[int]:
    return [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(repetitions)]


# --- graph sources ------------------------------------------------------------

def graph_from_params(p: dict, seed: int) -> WeightedGraph:
    if p.get("input"):
        G = load_graph(p["input"])
    else:
        gen = p.get("gen", "random-regular")
        if gen == "random-regular":
            G = gen_random_regular(int(p["n"]), int(p["d"]), int(p.get("girth", 3)),
                                   seed=int(p.get("graph_seed", seed)))
        elif gen == "complete":
            G = gen_complete(int(p["n"]))
        elif gen == "cycle":
            G = gen_cycle(int(p["n"]))
        elif gen == "hypercube":
            G = gen_hypercube(int(p["dim"]))
        elif gen == "petersen":
            G = gen_petersen()
        elif gen == "gq":
            G = gen_gq_incidence(int(p["q"]))
        else:
            raise SpecError(f"unknown generator {gen!r}")
    if p.get("normalize", True) and G.m:
        G = normalize_max_weighted_degree(G)
    return G


def validate_spec(spec: ExperimentSpec) -> None:
    if spec.kind not in KINDS:
        raise SpecError(f"unknown experiment kind {spec.kind!r}; expected one of {KINDS}")
    if spec.repetitions < 1:
        raise SpecError("repetitions must be positive")
    p = spec.params
    if spec.kind == "ab-certify":
        k = int(p.get("k", 1))
        if k < 0:
            raise SpecError("k must be nonnegative")
        if p.get("input"):
            if not Path(p["input"]).exists():
                raise SpecError(f"input file {p['input']} does not exist")
            g = girth(load_graph(p["input"]), limit=2 * k + 2)
        elif p.get("gen", "random-regular") == "random-regular":
            for key in ("n", "d"):
                if key not in p:
                    raise SpecError(f"random-regular generator needs {key!r}")
            g = int(p.get("girth", 3))
        else:
            g = None
        if g is not None and k > 0 and 2 * k + 1 >= g:
            raise SpecError(f"k = {k} needs girth > 2k+1 = {2 * k + 1}, got {g}")
    elif spec.kind == "game":
        n, d = int(p.get("n", 8)), float(p.get("d", 8))
        if n < 1 or n & (n - 1):
            raise SpecError(f"the Hadamard adversary needs n a power of 2, got {n}")
        if d <= 2:
            raise SpecError("d must exceed 2")
        if p.get("player", "bss") not in ("bss", "uniform", "greedy", "random"):
            raise SpecError(f"unknown player {p.get('player')!r}")
    elif spec.kind == "sparsify":
        if float(p.get("d", 8)) <= 2:
            raise SpecError("d must exceed 2")
        if p.get("input") and not Path(p["input"]).exists():
            raise SpecError(f"input file {p['input']} does not exist")
    elif spec.kind == "laguerre":
        n, T, S = int(p.get("n", 8)), int(p.get("T", 32)), float(p.get("S", 1))
        if not (T >= n >= 1) or S <= 0:
            raise SpecError("need T >= n >= 1 and S > 0")


# --- single runs --------------------------------------------------------------

def _run_ab(p: dict, seed: int) -> dict:
    G = graph_from_params(p, seed)
    k = int(p.get("k", 1))
    if p.get("root") is None:
        cert = best_root_certificate(G, k)
    else:
        cert = ab_certificate(G, int(p["root"]), k)
    rec = {"n": G.n, "m": G.m, "average_degree": G.average_degree}
    rec.update(cert.to_dict())
    if G.n <= 200 and k <= 6 and G.is_connected() and k >= 1:
        rec["walk_stats"] = walk_stats(G, k).to_dict(G.average_degree)
    rec["sound"] = cert.certified_lower_bound <= cert.eigensolver_ratio + 1e-9
    return rec


def _run_game(p: dict, seed: int) -> dict:
    n, d = int(p.get("n", 8)), float(p.get("d", 8))
    T = math.ceil(d / 2 * n)
    player = make_player(p.get("player", "bss"), seed=seed)
    res = play_game(player, HadamardAdversary(n), n, T)
    rec = res.to_dict()
    rec["kappa_d"] = kappa(d)
    rec["seed"] = seed
    if res.S > 0 and T >= n:
        lr = laguerre_roots(n, T, res.S)
        rec["laguerre_condition"] = float(lr[-1] / lr[0])
    if n <= 16:
        rec["charpoly_check"] = charpoly_trace_check(res)
    return rec


def _run_sparsify(p: dict, seed: int) -> dict:
    G = graph_from_params(p, seed)
    rep = sparsify(G, float(p.get("d", 8)), player=p.get("player", "bss"))
    if p.get("output"):
        save_graph(rep.sparsifier, p["output"])
    rec = rep.to_dict()
    rec["verified"] = verify_sparsifier(G, rep.sparsifier, rep.kappa_target - 1)["holds"]
    return rec


def _run_laguerre(p: dict, seed: int) -> dict:
    n, T, S = int(p.get("n", 8)), int(p.get("T", 32)), float(p.get("S", 1))
    roots = real_roots(laguerre_poly(n, T, S))
    jac = laguerre_roots(n, T, S)
    edges = mp_edges(n, T, S)
    return {
        "n": n, "T": T, "S": S,
        "lambda_min": float(roots[0]), "lambda_max": float(roots[-1]),
        "condition": float(roots[-1] / roots[0]) if roots[0] > 0 else None,
        "jacobi_max_rel_diff": float(np.max(np.abs(roots - jac) / np.abs(jac))),
        **edges,
        "rel_err_min": float(roots[0] / edges["lambda_min_pred"] - 1) if edges["lambda_min_pred"] else None,
        "rel_err_max": float(roots[-1] / edges["lambda_max_pred"] - 1),
        "roots": roots.tolist(),
    }


_DISPATCH = {"ab-certify": _run_ab, "game": _run_game, "sparsify": _run_sparsify,
             "laguerre": _run_laguerre}


def _one(args):
    kind, params, seed, rep = args
    try:
        rec = _DISPATCH[kind](params, seed)
        rec["ok"] = True
    except (GraphError, ValueError, AssertionError) as exc:
        rec = {"ok": False, "error": f"{type(exc).__name__}: {exc}", "params": params, "seed": seed}
    rec["repetition"] = rep
    return rec


def _summary(records: list[dict]) -> dict:
    out = {}
    numeric = {}
    for r in records:
        for k, v in r.items():
            if isinstance(v, (int, float)) and not isinstance(v, bool) and v is not None:
                numeric.setdefault(k, []).append(float(v))
    for k, vs in numeric.items():
        if k == "repetition":
            continue
        out[k] = {"min": min(vs), "max": max(vs), "mean": math.fsum(vs) / len(vs)}
    return out


def run(spec: ExperimentSpec) -> Report:
    validate_spec(spec)
    if spec.kind == "validate":
        report = validate_suite()
    else:
        seeds = _rep_seeds(spec.seed, spec.repetitions)
        jobs = [(spec.kind, spec.params, s, i) for i, s in enumerate(seeds)]
        workers = int(os.environ.get(WORKERS_ENV, "1"))
        if workers > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=workers) as ex:
                records = list(ex.map(_one, jobs))
        else:
            records = [_one(j) for j in jobs]
        passed = _passed(spec.kind, records)
        report = Report(header=_header(spec.seed), experiment=asdict(spec), records=records,
                        summary=_summary(records), passed=passed)
    _write(report, spec)
    return report


def _passed(kind: str, records: list[dict]) -> bool:
    if not all(r.get("ok") for r in records):
        return False
    if kind == "ab-certify":
        return all(r["sound"] for r in records)
    if kind == "game":
        return all(
            r["player"] != "bss" or (r["condition"] is not None and r["condition"] <= r["kappa_d"] + 1e-6)
            for r in records
        )
    if kind == "sparsify":
        return all(r["verified"] for r in records)
    return True


def _header(seed: int) -> dict:
    return {"tool": "ramanujan_lab", "version": __version__, "seed": seed,
            "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S")}


def _write(report: Report, spec: ExperimentSpec) -> None:
    if spec.json_out:
        Path(spec.json_out).write_text(json.dumps(report.to_dict(), indent=2, default=_json_default))
    if spec.csv_out:
        Path(spec.csv_out).write_text(report.csv_body())


# --- validation suite ---------------------------------------------------------

def _check(name: str, fn) -> dict:
    t = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # failures are report content
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return {"check": name, "passed": bool(ok), "detail": detail}, time.perf_counter() - t


def _suite_graphs(rng: np.random.Generator) -> list[WeightedGraph]:
    base = [gen_cycle(9), gen_petersen(), gen_hypercube(4), gen_complete(7),
            gen_random_regular(40, 3, 6, seed=11), gen_random_regular(60, 4, 5, seed=12)]
    out = []
    for G in base:
        out.append(normalize_max_weighted_degree(G))
        out.append(normalize_max_weighted_degree(G.with_weights(rng.uniform(0.1, 2.0, G.m))))
    return out


def _v_certificate_soundness():
    rng = np.random.default_rng(101)
    worst = -math.inf
    for G in _suite_graphs(rng):
        g = girth(G)
        kmax = 0 if g == math.inf else int((g - 2) // 2)
        kmax = min(kmax, 3) if g != math.inf else 3
        for _ in range(3):
            k = int(rng.integers(0, kmax + 1))
            r = int(rng.integers(G.n))
            c = ab_certificate(G, r, k)
            worst = max(worst, c.certified_lower_bound - c.eigensolver_ratio)
    return worst <= 1e-9, {"max_bound_minus_ratio": worst}


def _v_antisymmetry():
    G = normalize_max_weighted_degree(
        gen_random_regular(60, 3, 8, seed=5).with_weights(np.random.default_rng(5).uniform(0.2, 1, 90)))
    c = ab_certificate(G, 0, 3)
    err = max(abs(c.fWf_signed + c.fWf), abs(c.fDf_signed - c.fDf))
    return err <= 1e-10, {"max_error": err}


def _v_edge_stationarity():
    G = normalize_max_weighted_degree(
        gen_random_regular(50, 3, 4, seed=6).with_weights(np.random.default_rng(6).uniform(0.2, 1, 75)))
    ws = walk_stats(G, 4)
    err = abs(ws.expected_sqrt_sum - 4 * edge_stationary_mean(G))
    return err <= 1e-10 and abs(ws.total_probability - 1) <= 1e-10, {"error": err}


def _v_pi_average():
    G = normalize_max_weighted_degree(
        gen_random_regular(60, 3, 8, seed=7).with_weights(np.random.default_rng(7).uniform(0.2, 1, 90)))
    direct = float(np.dot(stationary_distribution(G), root_adjacency_forms(G, 3)))
    via_walks = walk_stats(G, 3).nonbacktracking_weighted
    return abs(direct - via_walks) <= 1e-8, {"direct": direct, "walks": via_walks}


def _v_laplacian_psd():
    rng = np.random.default_rng(8)
    worst = 0.0
    for G in _suite_graphs(rng):
        vals = eig(laplacian(G)).values
        worst = max(worst, -vals[0] / vals[-1])
    return worst <= 1e-10, {"worst_relative_negative": worst}


def _v_closure():
    rng = np.random.default_rng(9)
    for _ in range(50):
        n = int(rng.integers(2, 10))
        p = RealRootedPoly.from_roots(rng.uniform(-3, 3, n), exact=True)
        real_roots(one_minus_alpha_D(p, float(rng.normal())))
    return True, {"instances": 50}


def _v_majorization():
    rng = np.random.default_rng(10)
    worst = math.inf
    for _ in range(60):
        n = int(rng.integers(1, 9))
        T = int(rng.integers(n, 21))
        s = rng.uniform(0, 3, T)
        if s.sum() == 0:
            continue
        S = float(np.sum(s)) / n
        sl = majorization_slack(real_roots(product_transform(n, s)),
                                real_roots(laguerre_poly(n, T, S)))
        worst = min(worst, sl["prefix_slack"] if n > 1 else 0.0)
        if not sl["holds"]:
            return False, sl
    return True, {"min_prefix_slack": worst}


def _v_commutativity():
    rng = np.random.default_rng(11)
    s = list(rng.uniform(0, 2, 7))
    a = product_transform(4, s)
    b = product_transform(4, list(reversed(s)))
    return a.coeffs == b.coeffs, {"exact_equal": a.coeffs == b.coeffs}


def _v_charpoly():
    rng = np.random.default_rng(12)
    worst = 0.0
    for i in range(12):
        n = [2, 4, 8][i % 3]
        players = [UniformPlayer(), RandomPlayer(int(rng.integers(1000)), (0.5, 1.0, 2.0))]
        res = play_game(players[i % 2], HadamardAdversary(n), n, int(rng.integers(n, 3 * n + 1)))
        chk = charpoly_trace_check(res)
        worst = max(worst, chk["max_rel_error"])
    return worst <= 1e-8, {"max_rel_error": worst}


def _v_barrier():
    details = {}
    ok = True
    for n in (4, 8, 16):
        p = BssPlayer()
        res = play_game(p, HadamardAdversary(n), n, 4 * n)
        ok &= res.barrier["ok"] and res.condition <= kappa(8) + 1e-6
        details[n] = res.condition
    return ok, details


def _v_parameter_identity():
    worst = 0.0
    for beta in (2, 4, 9, 16):
        n = 8
        p = bss_parameters(beta, n)
        T = beta * n
        ratio = (p["u0"] + T * p["delta_U"]) / (p["l0"] + T * p["delta_L"])
        worst = max(worst, abs(ratio - kappa(2 * beta)))
    return worst <= 1e-12, {"max_error": worst}


def _v_lower_bound():
    worst = math.inf
    for n in (4, 8):
        for player in (UniformPlayer(), GreedyConditionPlayer(), RandomPlayer(3)):
            res = play_game(player, HadamardAdversary(n), n, 4 * n)
            lr = laguerre_roots(n, 4 * n, res.S)
            worst = min(worst, res.condition - lr[-1] / lr[0])
    return worst >= -1e-6, {"min_gap": worst}


def _v_isotropy():
    G = gen_random_regular(30, 4, 3, seed=13)
    G = G.with_weights(np.random.default_rng(13).uniform(0.1, 2, G.m))
    err = edge_vectors(G).isotropy_error()
    return err <= 1e-8, {"frobenius_error": err}


def _v_sparsifier():
    G = gen_complete(16)
    rep = sparsify(G, 8)
    ver = verify_sparsifier(G, rep.sparsifier, kappa(8) - 1 + 1e-6)
    return ver["holds"], {"kappa_measured": ver["kappa_measured"]}


def _v_girth_oracle():
    import networkx as nx

    rng = np.random.default_rng(14)
    for _ in range(10):
        n = int(rng.integers(4, 11))
        H = nx.gnp_random_graph(n, 0.35, seed=int(rng.integers(10**6)))
        G = WeightedGraph(n, tuple((u, v, 1.0) for u, v in H.edges()))
        cycles = [len(c) for c in nx.simple_cycles(H.to_directed()) if len(c) >= 3]
        want = min(cycles) if cycles else math.inf
        if girth(G) != want:
            return False, {"n": n, "edges": list(H.edges())}
    return True, {"instances": 10}


SUITE = {
    "girth_oracle": _v_girth_oracle,
    "laplacian_psd": _v_laplacian_psd,
    "certificate_soundness": _v_certificate_soundness,
    "antisymmetry": _v_antisymmetry,
    "edge_stationarity": _v_edge_stationarity,
    "pi_average_identity": _v_pi_average,
    "real_rootedness_closure": _v_closure,
    "majorization": _v_majorization,
    "commutativity": _v_commutativity,
    "charpoly_invariance": _v_charpoly,
    "barrier_safety": _v_barrier,
    "parameter_identity": _v_parameter_identity,
    "lower_bound_witness": _v_lower_bound,
    "edge_vector_isotropy": _v_isotropy,
    "sparsifier_verification": _v_sparsifier,
}


def validate_suite() -> Report:
    records, timings = [], {}
    for name, fn in SUITE.items():
        rec, secs = _check(name, fn)
        records.append(rec)
        timings[name] = round(secs, 3)
    header = _header(0)
    header["seconds"] = timings
    passed = all(r["passed"] for r in records)
    summary = {"checks": len(records), "failed": [r["check"] for r in records if not r["passed"]]}
    return Report(header=header, experiment={"kind": "validate"}, records=records,
                  summary=summary, passed=passed)
