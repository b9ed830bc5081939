"""Real-rooted polynomial tools: the ``(1 - a D)`` operator, root finding by
derivative interlacing, majorization of root vectors, the Laguerre closed
form of ``(1 - (S/T) D)^T x^n`` and its Marchenko-Pastur edges.

Coefficients are stored in ascending order (``coeffs[i]`` multiplies
``x**i``).  A polynomial is either exact (``fractions.Fraction``
coefficients) or float (``numpy.float64``).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from scipy.linalg import eigh_tridiagonal


class NotRealRootedError(ValueError):
    """The root finder could not certify that every root is real."""


@dataclass(frozen=True)
class RealRootedPoly:
    coeffs: tuple
    exact: bool = False
    _roots: list = field(default_factory=list, repr=False, compare=False)

    def __post_init__(self):
        c = list(self.coeffs)
        if self.exact:
            c = [Fraction(v) for v in c]
        else:
            c = [float(v) for v in c]
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        if not c or c[-1] == 0:
            raise ValueError("the zero polynomial has no well-defined degree")
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def monomial(cls, n: int, exact: bool = True) -> "RealRootedPoly":
        return cls((0,) * n + (1,), exact=exact)

    @classmethod
    def from_roots(cls, roots: Iterable, exact: bool = False) -> "RealRootedPoly":
        c = [Fraction(1)] if exact else [1.0]
        for r in roots:
            r = Fraction(r) if exact else float(r)
            nxt = [0 * c[0]] * (len(c) + 1)
            for i, v in enumerate(c):
                nxt[i + 1] += v
                nxt[i] -= r * v
            c = nxt
        return cls(tuple(c), exact=exact)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def as_float(self) -> np.ndarray:
        return np.array([float(v) for v in self.coeffs])

    def to_float(self) -> "RealRootedPoly":
        return RealRootedPoly(tuple(self.as_float()), exact=False)

    def derivative(self) -> "RealRootedPoly":
        if self.degree == 0:
            raise ValueError("derivative of a constant is the zero polynomial")
        return RealRootedPoly(
            tuple(i * self.coeffs[i] for i in range(1, len(self.coeffs))), exact=self.exact
        )

    def __call__(self, x):
        acc = 0 * self.coeffs[0]
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def roots(self) -> np.ndarray:
        if not self._roots:
            self._roots.append(real_roots(self))
        return self._roots[0]

    def to_dict(self) -> dict:
        coeffs = [str(c) for c in self.coeffs] if self.exact else list(self.coeffs)
        return {"degree": self.degree, "exact": self.exact, "coeffs_ascending": coeffs,
                "roots": real_roots(self).tolist()}


# --- the (1 - a D) operator -------------------------------------------------

def one_minus_alpha_D(p: RealRootedPoly, alpha) -> RealRootedPoly:
    """``p - alpha * p'``."""
    if p.exact:
        alpha = Fraction(alpha)
    else:
        alpha = float(alpha)
    c = p.coeffs
    out = [c[i] - alpha * (i + 1) * c[i + 1] for i in range(len(c) - 1)] + [c[-1]]
    return RealRootedPoly(tuple(out), exact=p.exact)


def product_transform(n: int, scalings: Sequence, exact: bool = True) -> RealRootedPoly:
    """``prod_t (1 - (s_t/n) D) x^n``, folded left over ``scalings``."""
    if any(s < 0 for s in scalings):
        warnings.warn("negative scalings: the algebra holds but the game never produces them",
                      stacklevel=2)
    p = RealRootedPoly.monomial(n, exact=exact)
    for s in scalings:
        alpha = Fraction(s) / n if exact else float(s) / n
        p = one_minus_alpha_D(p, alpha)
    return p


def laguerre_poly(n: int, T: int, S, exact: bool = True) -> RealRootedPoly:
    """Coefficients of ``(1 - (S/T) D)^T x^n`` from the binomial expansion
    ``sum_j C(T, j) (-S/T)^j n!/(n-j)! x^(n-j)``."""
    if not (T >= n >= 1) or S <= 0:
        raise ValueError(f"need T >= n >= 1 and S > 0, got n={n}, T={T}, S={S}")
    a = Fraction(S) / T if exact else float(S) / T
    c = [0 * a] * (n + 1)
    falling = 1
    for j in range(n + 1):
        c[n - j] = math.comb(T, j) * (-a) ** j * falling
        falling *= n - j
    return RealRootedPoly(tuple(c), exact=exact)


def laguerre_roots(n: int, T: int, S) -> np.ndarray:
    """Zeros of ``(1 - (S/T) D)^T x^n`` via the Jacobi matrix of the
    generalized Laguerre polynomial ``L_n^(T-n)``, rescaled by ``S/T``."""
    if not (T >= n >= 1) or S <= 0:
        raise ValueError(f"need T >= n >= 1 and S > 0, got n={n}, T={T}, S={S}")
    alpha = T - n
    i = np.arange(n)
    diag = 2.0 * i + alpha + 1.0
    off = np.sqrt(i[1:] * (i[1:] + alpha))
    y = eigh_tridiagonal(diag, off, eigvals_only=True)
    return np.sort(y) * (float(S) / T)


def mp_edges(n: int, T: int, S) -> dict:
    """Limits of the extreme zeros of ``(1 - (S/T) D)^T x^n`` as ``n`` grows
    with ``T/n`` fixed; ``S`` is the mean zero."""
    if T < n:
        raise ValueError("need T >= n")
    r = math.sqrt(n / T)
    return {"lambda_min_pred": float(S) * (1 - r) ** 2, "lambda_max_pred": float(S) * (1 + r) ** 2}


def kappa(d) -> float:
    """``(sqrt(d/2) + 1)^2 / (sqrt(d/2) - 1)^2``."""
    if d <= 2:
        raise ValueError(f"kappa needs d > 2, got {d}")
    b = math.sqrt(d / 2)
    return (b + 1) ** 2 / (b - 1) ** 2


def ramanujan_ratio(d) -> float:
    """``(d + 2 sqrt(d-1)) / (d - 2 sqrt(d-1))``."""
    r = 2 * math.sqrt(d - 1)
    if d - r <= 0:
        raise ValueError(f"Ramanujan ratio undefined for d={d}")
    return (d + r) / (d - r)


# --- root finding -----------------------------------------------------------

def _exact_sign_evaluator(coeffs: Sequence[Fraction]):
    """Exact sign of ``p(x)`` at a float ``x`` using integer arithmetic."""
    den = 1
    for c in coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    n = len(ints) - 1

    def sign(x: float) -> int:
        num, d = float(x).as_integer_ratio()
        e = d.bit_length() - 1
        acc = ints[n]
        for i in range(n - 1, -1, -1):
            acc = acc * num + (ints[i] << (e * (n - i)))
        return (acc > 0) - (acc < 0)

    return sign


def _spread_bound(c: np.ndarray) -> tuple[float, float]:
    """Interval containing every zero of a real-rooted polynomial
    (Laguerre-Samuelson: mean +- sigma * sqrt(n - 1))."""
    n = len(c) - 1
    e1 = -c[n - 1] / c[n]
    e2 = c[n - 2] / c[n] if n >= 2 else 0.0
    mean = e1 / n
    sum_sq = e1 * e1 - 2 * e2
    var = max(sum_sq / n - mean * mean, 0.0)
    half = math.sqrt(var * max(n - 1, 1))
    pad = 1e-9 * (abs(mean) + half) + 1e-12 + 1e-6 * half
    return mean - half - pad, mean + half + pad


def real_roots(p: RealRootedPoly, rel_tol: float = 1e-6) -> np.ndarray:
    """All zeros of a real-rooted polynomial, ascending.

    The zeros of ``p^(j+1)`` bracket those of ``p^(j)`` (interlacing), so the
    search walks down the derivative chain from the linear derivative,
    bisecting every bracket in parallel.  Exact polynomials are evaluated
    with exact signs; float polynomials with Horner.  A bracket without a
    sign change is accepted only if ``p`` is negligible at an endpoint
    (a multiple zero), otherwise :class:`NotRealRootedError` is raised.
    """
    n = p.degree
    if n == 0:
        return np.zeros(0)
    cf = p.as_float()
    cf = cf / cf[-1]
    if n == 1:
        return np.array([-cf[0]])
    lo_b, hi_b = _spread_bound(cf)

    derivs = [p]
    for _ in range(n - 1):
        derivs.append(derivs[-1].derivative())

    roots = np.array([-derivs[-1].coeffs[0] / derivs[-1].coeffs[1]], dtype=float)
    for j in range(n - 2, -1, -1):
        q = derivs[j]
        qf = q.as_float()
        qf = qf / qf[-1]
        edges = np.concatenate([[lo_b], roots, [hi_b]])
        a, b = edges[:-1].copy(), edges[1:].copy()
        if q.exact:
            sgn = _exact_sign_evaluator(q.coeffs)
            lead = 1 if q.coeffs[-1] > 0 else -1

            def sign(xs):
                return np.array([sgn(x) * lead for x in xs])
        else:
            def sign(xs, qf=qf):
                return np.sign(np.polyval(qf[::-1], xs))
        sa, sb = sign(a), sign(b)
        with np.errstate(over="ignore"):
            mag = np.polyval(np.abs(qf[::-1]), np.maximum(np.abs(a), np.abs(b)))
        out = np.empty_like(a)
        active = (sa * sb) < 0
        zero_a = sa == 0
        zero_b = (sb == 0) & ~zero_a
        out[zero_a] = a[zero_a]
        out[zero_b] = b[zero_b]
        stuck = ~active & ~zero_a & ~zero_b
        if np.any(stuck):
            idx = np.nonzero(stuck)[0]
            with np.errstate(over="ignore", invalid="ignore"):
                va = np.abs(np.polyval(qf[::-1], a[idx]))
                vb = np.abs(np.polyval(qf[::-1], b[idx]))
                resid = np.minimum(va, vb) / np.maximum(mag[idx], 1e-300)
            pick = np.where(va <= vb, a[idx], b[idx])
            if np.any(resid > rel_tol):
                worst = int(idx[np.argmax(resid)])
                raise NotRealRootedError(
                    f"not numerically real-rooted: derivative order {j}, bracket "
                    f"[{a[worst]:.6g}, {b[worst]:.6g}] has no sign change "
                    f"(relative residual {resid.max():.3e})"
                )
            out[idx] = pick
        if np.any(active):
            A, B, SA = a[active], b[active], sa[active]
            for _ in range(2000):
                mid = 0.5 * (A + B)
                done = (mid <= A) | (mid >= B)
                if np.all(done):
                    break
                sm = sign(mid)
                left = (sm * SA) < 0
                exact_hit = sm == 0
                B = np.where(left | exact_hit, mid, B)
                A = np.where(left | exact_hit | done, A, mid)
                A = np.where(exact_hit, mid, A)
            out[active] = 0.5 * (A + B)
        roots = np.sort(out)
    return roots


def companion_roots(p: RealRootedPoly, dps: int | None = None) -> np.ndarray:
    """Eigenvalues of the companion matrix (complex in general).

    Float polynomials use LAPACK.  Exact polynomials are solved in
    ``dps``-digit arithmetic (default ``30 + degree``) because the monomial
    basis is too ill-conditioned for double precision beyond degree ~15.
    """
    if not p.exact:
        return np.roots(p.as_float()[::-1])
    import mpmath

    n = p.degree
    with mpmath.workdps(dps or 30 + n):
        c = [mpmath.mpf(v.numerator) / v.denominator for v in p.coeffs]
        C = mpmath.zeros(n, n)
        for i in range(1, n):
            C[i, i - 1] = 1
        for i in range(n):
            C[i, n - 1] = -c[i] / c[n]
        ev = mpmath.eig(C, left=False, right=False)
        return np.array([complex(e) for e in ev])


def validate_real_rooted(p: RealRootedPoly, imag_tol: float = 1e-8, agree_tol: float = 1e-7) -> dict:
    """Cross-check the interlacing roots against the companion matrix."""
    r = real_roots(p)
    z = companion_roots(p)
    scale = max(1.0, float(np.max(np.abs(z))) if z.size else 1.0)
    imag = float(np.max(np.abs(z.imag))) / scale if z.size else 0.0
    if imag > imag_tol:
        raise NotRealRootedError(f"companion eigenvalues have imaginary parts up to {imag:.3e}")
    zr = np.sort(z.real)
    dev = float(np.max(np.abs(zr - r))) / scale if r.size else 0.0
    return {"roots": r, "companion": zr, "max_imag": imag, "max_deviation": dev,
            "agree": dev <= agree_tol}


# --- majorization -----------------------------------------------------------

def majorizes(b, a, tol: float = 1e-8) -> bool:
    """True when ``a`` is majorized by ``b`` (``a < b``): equal totals and every
    prefix sum of the sorted ``a`` at least the matching prefix sum of ``b``."""
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.size} vs {b.size}")
    return majorization_slack(b, a, tol)["holds"]


def majorization_slack(b, a, tol: float = 1e-8) -> dict:
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.size} vs {b.size}")
    scale = max(1.0, float(np.sum(np.abs(a))), float(np.sum(np.abs(b))))
    pa, pb = np.cumsum(a), np.cumsum(b)
    total_gap = abs(pa[-1] - pb[-1])
    prefix_slack = float(np.min(pa[:-1] - pb[:-1])) if a.size > 1 else 0.0
    holds = total_gap <= tol * scale and prefix_slack >= -tol * scale
    if holds:
        # a's extremes sit inside b's
        assert a[0] >= b[0] - tol * scale and a[-1] <= b[-1] + tol * scale
    return {"holds": bool(holds), "total_gap": float(total_gap), "prefix_slack": prefix_slack}
