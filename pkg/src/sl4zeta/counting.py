"""Counting functions of closed geodesics, smoothed sums, windows and Tauberian estimates.

A geodesic γ = γ0^k has length k·l0 and norm N(γ) = e^{k l0}; its M-part is
b^k with angles (kθ, kφ).  Chebyshev-type sums run over all powers, the
π-type counts over primitive classes only.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, TextIO, Tuple

import numpy as np
from scipy import integrate, optimize

from .cartan import det_one_minus_n_array
from .km_ring import sigma_tilde, trace_at
from .logint import li, li_fast
from .spectrum import Spectrum

__all__ = [
    "Window", "full_torus", "half_torus", "inset_window", "psi", "psi_tilde", "psi_window", "psi1",
    "pi_count", "pi_tilde", "pi1", "psi_j", "delta_op", "li", "S_fn", "phi_nj", "dirichlet_Lnj",
    "abel_integral", "weyl_mass", "inset_for_mass", "tauberian_estimate", "fit_main_term", "FitResult",
    "count_table", "write_count_table", "read_count_table",
]

_SIGMA_TILDE = sigma_tilde()


# ---------------------------------------------------------------------------
# windows

Box = Tuple[Fraction, Fraction, Fraction, Fraction]


def _smoothstep(t: np.ndarray) -> np.ndarray:
    t = np.clip(t, 0.0, 1.0)
    return t * t * t * (10.0 - 15.0 * t + 6.0 * t * t)


def _wrap(a: np.ndarray) -> np.ndarray:
    """Representative in (-π, π]."""
    return np.pi - np.mod(np.pi - a, 2 * np.pi)


def _bump_1d(a: np.ndarray, lo: float, hi: float, margin: float) -> np.ndarray:
    d = np.minimum(a - lo, hi - a)
    if margin <= 0:
        return (d > 0).astype(float)
    return _smoothstep(d / margin)


@dataclass(frozen=True)
class Window:
    """Union of open boxes (in units of π) closed under (θ, φ) -> (-θ, -φ).

    ``margin`` (radians) is the width of the smooth ramp; the bump equals 1 on
    points at distance >= margin from the box edges and 0 outside.  margin = 0
    gives the indicator of the open window.
    """

    boxes: Tuple[Box, ...]
    margin: float = 0.0

    def __post_init__(self) -> None:
        boxes = []
        for b in self.boxes:
            if len(b) != 4:
                raise ValueError(f"a box needs 4 numbers t0,t1,p0,p1, got {b!r}")
            t0, t1, p0, p1 = (Fraction(x) for x in b)
            for lo, hi, name in ((t0, t1, "theta"), (p0, p1, "phi")):
                if not lo < hi:
                    raise ValueError(f"empty {name} interval ({lo}, {hi})")
                if not ((0 <= lo and hi <= 1) or (-1 <= lo and hi <= 0)):
                    raise ValueError(f"{name} interval ({lo}, {hi}) crosses the non-regular locus")
            boxes.append((t0, t1, p0, p1))
        closed = set(boxes) | {(-t1, -t0, -p1, -p0) for t0, t1, p0, p1 in boxes}
        object.__setattr__(self, "boxes", tuple(sorted(closed)))
        if self.margin < 0:
            raise ValueError("margin must be non-negative")

    @classmethod
    def parse(cls, spec: str, margin: float = 0.0) -> "Window":
        """'t0,t1,p0,p1;...' with entries in units of π (fractions allowed)."""
        if spec.strip() in ("", "empty"):
            return cls((), margin)
        if spec.strip() == "full":
            return full_torus(margin)
        if spec.strip() == "half":
            return half_torus(margin)
        boxes = []
        for part in spec.split(";"):
            try:
                boxes.append(tuple(Fraction(x.strip()) for x in part.split(",")))
            except (ValueError, ZeroDivisionError):
                raise ValueError(f"bad window box {part!r}; expected t0,t1,p0,p1 in units of pi") from None
        return cls(tuple(boxes), margin)

    def with_margin(self, margin: float) -> "Window":
        return Window(self.boxes, margin)

    def weight(self, theta, phi) -> np.ndarray:
        """Bump value h(θ, φ); boxes are disjoint in practice, overlaps take the maximum."""
        th, ph = _wrap(np.asarray(theta, dtype=float)), _wrap(np.asarray(phi, dtype=float))
        out = np.zeros(np.broadcast(th, ph).shape)
        for t0, t1, p0, p1 in self.boxes:
            h = _bump_1d(th, float(t0) * np.pi, float(t1) * np.pi, self.margin) * \
                _bump_1d(ph, float(p0) * np.pi, float(p1) * np.pi, self.margin)
            out = np.maximum(out, h)
        return out

    def contains(self, theta, phi) -> np.ndarray:
        return self.with_margin(0.0).weight(theta, phi) > 0


def full_torus(margin: float = 0.0) -> Window:
    return Window(((0, 1, 0, 1), (0, 1, -1, 0)), margin)


def half_torus(margin: float = 0.0) -> Window:
    """(0, π) x (0, π) together with its flip."""
    return Window(((0, 1, 0, 1),), margin)


def inset_window(a: float, margin: float = 0.0) -> Window:
    """Full torus with every quadrant shrunk to (a, 1-a) in units of π."""
    a = Fraction(a).limit_denominator(10**9)
    return Window(((a, 1 - a, a, 1 - a), (a, 1 - a, a - 1, -a)), margin)


# ---------------------------------------------------------------------------
# power enumeration

def _powers(sp: Spectrum, log_x: float) -> Iterator[Tuple[int, np.ndarray]]:
    """Yield (k, indices of classes with k·l0 <= log x)."""
    a = sp.arrays
    if len(sp) == 0:
        return
    k = 1
    while k * a.l0[0] <= log_x:
        # lengths are sorted, so the admissible classes form a prefix
        yield k, np.arange(int(np.searchsorted(a.l0, log_x / k, side="right")))
        k += 1


def _log(x: float) -> float:
    if x < 2:
        raise ValueError(f"counting functions need x >= 2, got {x}")
    return math.log(x)


def psi(sp: Spectrum, x: float) -> float:
    """ψ(x) = Σ_{N(γ) <= x} χ1(Γ_γ) l0 over all powers."""
    a, total = sp.arrays, 0.0
    for k, idx in _powers(sp, _log(x)):
        total += float(np.sum(a.chi1_power(k)[idx] * a.l0[idx]))
    return total


def psi_tilde(sp: Spectrum, x: float) -> float:
    a, total = sp.arrays, 0.0
    for k, idx in _powers(sp, _log(x)):
        idx = idx[a.regular(k)[idx]]
        tr = trace_at(_SIGMA_TILDE, k * a.theta[idx], k * a.phi[idx])
        total += float(np.sum(a.c1[idx] * tr * a.l0[idx]))
    return total


def psi_window(sp: Spectrum, w: Window, x: float) -> float:
    """ψ_n(x) = Σ χ1(Γ_{γ0}) h_n(b^k) l0, no determinant factor."""
    a, total = sp.arrays, 0.0
    for k, idx in _powers(sp, _log(x)):
        total += float(np.sum(a.c1[idx] * w.weight(k * a.theta[idx], k * a.phi[idx]) * a.l0[idx]))
    return total


def psi1(sp: Spectrum, w: Window, x: float) -> float:
    """ψ¹(x): powers whose angles lie in the open window, indicator weight."""
    return psi_window(sp, w.with_margin(0.0), x)


def _primitive_idx(sp: Spectrum, x: float) -> np.ndarray:
    return np.arange(int(np.searchsorted(sp.arrays.l0, _log(x), side="right")))


def pi_count(sp: Spectrum, x: float) -> float:
    a = sp.arrays
    return float(np.sum(a.c1[_primitive_idx(sp, x)]))


def pi_tilde(sp: Spectrum, x: float) -> float:
    a = sp.arrays
    idx = _primitive_idx(sp, x)
    idx = idx[a.regular(1)[idx]]
    return float(np.sum(a.c1[idx] * trace_at(_SIGMA_TILDE, a.theta[idx], a.phi[idx])))


def pi1(sp: Spectrum, w: Window, x: float) -> float:
    a = sp.arrays
    idx = _primitive_idx(sp, x)
    return float(np.sum(a.c1[idx] * w.contains(a.theta[idx], a.phi[idx])))


def psi_j(sp: Spectrum, j: int, x: float) -> float:
    """ψ_j(x) = (1/j!) Σ_{N(γ) <= x} χ1(Γ_γ) l0 (x - N(γ))^j."""
    if j < 0:
        raise ValueError("j must be non-negative")
    a, total = sp.arrays, 0.0
    for k, idx in _powers(sp, _log(x)):
        total += float(np.sum(a.chi1_power(k)[idx] * a.l0[idx] * (x - np.exp(k * a.l0[idx])) ** j))
    return total / math.factorial(j)


def delta_op(f: Callable, d, D: int, x):
    """Δf(x) = Σ_{i=0}^{2D} (-1)^i C(2D, i) f(x + (2D - i) d); works on sympy expressions too."""
    if D < 1:
        raise ValueError("D must be at least 1")
    return sum((-1) ** i * math.comb(2 * D, i) * f(x + (2 * D - i) * d) for i in range(2 * D + 1))


def S_fn(sp: Spectrum, x: float) -> float:
    """S(x) = Σ_{N(γ) <= x} χ1(Γ_{γ0}) l0 / l_γ = Σ χ1(Γ_{γ0}) / k."""
    a, total = sp.arrays, 0.0
    for k, idx in _powers(sp, _log(x)):
        total += float(np.sum(a.c1[idx])) / k
    return total


# ---------------------------------------------------------------------------
# the weighted series L_n^j and its counting function

def _phi_terms(sp: Spectrum, w: Window, j: int, log_x: float) -> Tuple[np.ndarray, np.ndarray]:
    """Lengths l_γ and weights χ1 h_n(b_γ) l0 l_γ^{j+1} / det(1 - Ad(a_γ b_γ)|n) of all powers."""
    a = sp.arrays
    lengths, weights = [], []
    for k, idx in _powers(sp, log_x):
        th, ph, lg = k * a.theta[idx], k * a.phi[idx], k * a.l0[idx]
        wt = a.c1[idx] * w.weight(th, ph) * a.l0[idx] * lg ** (j + 1) / det_one_minus_n_array(lg, th, ph)
        lengths.append(lg)
        weights.append(wt)
    if not lengths:
        return np.zeros(0), np.zeros(0)
    lg, wt = np.concatenate(lengths), np.concatenate(weights)
    order = np.argsort(lg, kind="stable")
    return lg[order], wt[order]


def phi_nj(sp: Spectrum, w: Window, j: int, xs: Sequence[float]) -> np.ndarray:
    """φ_n^j(e^x) at each x (x is a log-norm), including the determinant factor."""
    xs = np.asarray(xs, dtype=float)
    lg, wt = _phi_terms(sp, w, j, float(np.max(xs)) if xs.size else 0.0)
    cum = np.concatenate([[0.0], np.cumsum(wt)])
    return cum[np.searchsorted(lg, xs, side="right")]


def dirichlet_Lnj(sp: Spectrum, w: Window, j: int, s: complex, L_max: float) -> complex:
    lg, wt = _phi_terms(sp, w, j, L_max)
    return complex(np.sum(wt * np.exp(-s * lg)))


def abel_integral(sp: Spectrum, w: Window, j: int, s: complex, L_max: float) -> complex:
    """∫_0^{L_max} φ_n^j(e^x) e^{-sx} dx, integrating the step function interval by interval."""
    lg, wt = _phi_terms(sp, w, j, L_max)
    if lg.size == 0:
        return 0j
    levels = np.cumsum(wt)
    right = np.append(lg[1:], L_max)
    return complex(np.sum(levels * (np.exp(-s * lg) - np.exp(-s * right))) / s)


# ---------------------------------------------------------------------------
# Weyl mass of a window

_WEYL_NORM = 16.0 / (4 * math.pi ** 2) / 2.0  # 16 sin²θ sin²φ dθdφ/(2π)², divided by |W| = 2


def _sin2_integral(lo: float, hi: float, margin: float) -> float:
    if margin <= 0 or hi - lo <= 0:
        return (hi - lo) / 2 - (math.sin(2 * hi) - math.sin(2 * lo)) / 4
    f = lambda a: float(_bump_1d(np.asarray(a), lo, hi, margin)) * math.sin(a) ** 2  # noqa: E731
    mid = (lo + hi) / 2
    pts = sorted({min(lo + margin, mid), max(hi - margin, mid)})
    val, _ = integrate.quad(f, lo, hi, points=pts, epsabs=1e-12, epsrel=1e-12, limit=200)
    return val


def weyl_mass(w: Window, margin_n: Optional[int] = None) -> float:
    """r_n = (1/2)∬ h_n(θ, φ) 16 sin²θ sin²φ dθdφ/(2π)² with margin 1/n (or the window's own)."""
    margin = w.margin if margin_n is None else (1.0 / margin_n if margin_n else 0.0)
    total = 0.0
    for t0, t1, p0, p1 in w.boxes:
        total += _sin2_integral(float(t0) * math.pi, float(t1) * math.pi, margin) * \
            _sin2_integral(float(p0) * math.pi, float(p1) * math.pi, margin)
    return _WEYL_NORM * total


def inset_for_mass(target: float) -> float:
    """Inset a (units of π) such that weyl_mass(inset_window(a)) = target, 0 < target < 2."""
    if not 0 < target < 2:
        raise ValueError("target mass must lie in (0, 2)")
    g = lambda a: 2 * (1 - 2 * a + math.sin(2 * math.pi * a) / math.pi) ** 2 - target  # noqa: E731
    return optimize.brentq(g, 0.0, 0.5, xtol=1e-15)


# ---------------------------------------------------------------------------
# Tauberian extrapolation and fits

_ERROR_BASIS: Tuple[Callable[[np.ndarray], np.ndarray], ...] = (
    lambda x: 1.0 / x,
    lambda x: np.exp(-x / 2.0),
)


def tauberian_estimate(xs: Sequence[float], A: Sequence[float], j: int, levels: int = 3) -> float:
    """Extrapolate lim A(x) x^{-(j+1)} e^{-x} from samples on an increasing grid.

    For the counting functions here the ratio is r + a/x + b e^{-x/2} + smaller
    terms: the 1/x part comes from the lower-order terms of ∫ u^{j+1} e^u du and
    the e^{-x/2} part from squares of primitives and from the determinant factor.
    Generalised Richardson extrapolation with ``levels`` nodes spread evenly over
    the last decade of the grid (x_max - log 10 .. x_max) removes the first
    ``levels - 1`` of these error terms.
    """
    xs, A = np.asarray(xs, dtype=float), np.asarray(A, dtype=float)
    if not 1 <= levels <= len(_ERROR_BASIS) + 1:
        raise ValueError(f"levels must be between 1 and {len(_ERROR_BASIS) + 1}")
    if xs.ndim != 1 or xs.shape != A.shape or xs.size < levels:
        raise ValueError("need matching 1-d grids with at least `levels` points")
    if np.any(np.diff(xs) <= 0):
        raise ValueError("grid must be strictly increasing")
    if np.any(A < 0) or np.any(np.diff(A) < 0):
        raise ValueError("A must be non-negative and monotone non-decreasing")
    lo = xs[-1] - math.log(10.0)
    if xs[0] > lo + 1e-12:
        raise ValueError("grid must cover a full decade below its last point")
    targets = np.linspace(lo, xs[-1], levels)
    nodes = sorted({int(np.argmin(np.abs(xs - t))) for t in targets})
    if len(nodes) < levels:
        raise ValueError("grid too coarse for the requested number of levels")
    x = xs[nodes]
    f = A[nodes] * x ** (-(j + 1)) * np.exp(-x)
    M = np.column_stack([np.ones(levels)] + [g(x) for g in _ERROR_BASIS[: levels - 1]])
    return float(np.linalg.solve(M, f)[0])


@dataclass(frozen=True)
class FitResult:
    model: str
    c: float
    max_rel_residual: float

    def to_json(self) -> str:
        return json.dumps({"model": self.model, "c": self.c, "max_rel_residual": self.max_rel_residual},
                          sort_keys=True)


_MODELS: Dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "x": lambda x: x,
    "x/log x": lambda x: x / np.log(x),
    "li": lambda x: li_fast(x),
}


def fit_main_term(xs: Sequence[float], ys: Sequence[float], model: str) -> FitResult:
    """Least-squares c in y ≈ c·f(x) for f in {x, x/log x, li}."""
    key = {"c*x": "x", "c*x/log x": "x/log x", "c*li": "li", "x/logx": "x/log x"}.get(model, model)
    if key not in _MODELS:
        raise ValueError(f"unknown model {model!r}; use x, x/log x or li")
    xs, ys = np.asarray(xs, dtype=float), np.asarray(ys, dtype=float)
    if xs.shape != ys.shape or xs.size < 10:
        raise ValueError("need at least 10 sample points")
    if np.any(xs < 2) or np.log10(xs.max() / xs.min()) < 2 - 1e-12:
        raise ValueError("sample points must be >= 2 and span at least two decades")
    f = _MODELS[key](xs)
    if not np.dot(f, f) > 0:
        raise ValueError("model vanishes on the whole grid")
    c = float(np.dot(f, ys) / np.dot(f, f))
    fitted = c * f
    live = fitted != 0
    rel = np.abs(ys[live] - fitted[live]) / np.abs(fitted[live])
    return FitResult(key, c, float(np.max(rel)))


# ---------------------------------------------------------------------------
# tables

COLUMNS = ("x", "psi", "psi_tilde", "psi1", "pi", "pi_tilde", "pi1", "li2")


def count_table(sp: Spectrum, xs: Sequence[float], window: Optional[Window] = None) -> Dict[str, np.ndarray]:
    w = window if window is not None else full_torus()
    xs = [float(x) for x in xs]
    if any(b <= a for a, b in zip(xs, xs[1:])):
        raise ValueError("x grid must be strictly increasing")
    rows = {
        "x": xs,
        "psi": [psi(sp, x) for x in xs],
        "psi_tilde": [psi_tilde(sp, x) for x in xs],
        "psi1": [psi1(sp, w, x) for x in xs],
        "pi": [pi_count(sp, x) for x in xs],
        "pi_tilde": [pi_tilde(sp, x) for x in xs],
        "pi1": [pi1(sp, w, x) for x in xs],
        "li2": [2 * li(x) for x in xs],
    }
    return {k: np.asarray(v) for k, v in rows.items()}


def write_count_table(out: TextIO, table: Dict[str, np.ndarray]) -> None:
    wr = csv.writer(out, lineterminator="\n")
    wr.writerow(COLUMNS)
    for i in range(len(table["x"])):
        wr.writerow([repr(float(table[c][i])) for c in COLUMNS])


def read_count_table(inp: TextIO) -> Dict[str, np.ndarray]:
    rows = list(csv.DictReader(inp))
    if not rows:
        raise ValueError("count table is empty")
    missing = [c for c in ("x",) if c not in rows[0]]
    if missing:
        raise ValueError("count table has no 'x' column")
    return {k: np.array([float(r[k]) for r in rows]) for k in rows[0]}
