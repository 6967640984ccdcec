"""Truncated Euler products for the generalised Selberg and Ruelle zeta functions.

Everything is evaluated in log space.  The finite term set is indexed by
(primitive class γ0, torsion subset I ⊆ R_γ, log-series index m) with total
length m·n_I·l0 ≤ L_max and m ≤ m_max; all functions here share it, so the
Ruelle/Selberg factorisation holds term by term up to rounding.
"""

from __future__ import annotations

import csv
import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Sequence, TextIO, Tuple

import numpy as np

from .cartan import det_one_minus_n_array
from .euler_char import chi_I, n_of, subsets
from .km_ring import VirtualRep, tensor, trace_at, wedge_nbar
from .spectrum import Spectrum


@dataclass(frozen=True)
class TruncationConfig:
    L_max: float = 40.0
    m_max: int = 10**6

    def __post_init__(self) -> None:
        if not self.L_max > 0:
            raise ValueError("L_max must be positive")
        if self.m_max < 1:
            raise ValueError("m_max must be at least 1")


@dataclass(frozen=True)
class TermSet:
    """Flattened Euler-product terms: weight χ_I, index m, power K = m·n_I and the class data."""

    chi: np.ndarray
    m: np.ndarray
    n: np.ndarray
    K: np.ndarray
    l0: np.ndarray
    theta: np.ndarray
    phi: np.ndarray

    def __len__(self) -> int:
        return int(self.K.size)

    @property
    def length(self) -> np.ndarray:
        return self.K * self.l0

    @property
    def angles(self) -> Tuple[np.ndarray, np.ndarray]:
        return self.K * self.theta, self.K * self.phi


def build_terms(sp: Spectrum, cfg: TruncationConfig) -> TermSet:
    cache = sp.__dict__.setdefault("_term_cache", {})
    if cfg in cache:
        return cache[cfg]
    a = sp.arrays
    cols: Dict[str, List[np.ndarray]] = {k: [] for k in ("chi", "m", "n", "l0", "theta", "phi")}

    def add(idx: np.ndarray, chi: np.ndarray, n: int) -> None:
        if idx.size == 0:
            return
        m_top = min(cfg.m_max, int(cfg.L_max // (n * a.l0[idx].min())))
        for m in range(1, m_top + 1):
            sel = idx[m * n * a.l0[idx] <= cfg.L_max]
            if sel.size == 0:
                break
            cols["chi"].append(chi[np.searchsorted(idx, sel)] if chi.size != sel.size else chi)
            cols["m"].append(np.full(sel.size, m, dtype=np.int64))
            cols["n"].append(np.full(sel.size, n, dtype=np.int64))
            for key in ("l0", "theta", "phi"):
                cols[key].append(getattr(a, key)[sel])

    idx_all = np.arange(len(sp), dtype=np.int64)
    add(idx_all, a.c1, 1)
    # torsion subsets, class by class (rare in practice)
    for i in np.nonzero(a.r1 > 0)[0]:
        c = sp.classes[i]
        R = c.R
        table = c.chi.by_power(R)
        for I in subsets(R):
            if not I:
                continue
            add(np.array([i]), np.array([float(chi_I(table, R, I))]), n_of(I))
    if cols["m"]:
        merged = {k: np.concatenate(v) for k, v in cols.items()}
    else:
        merged = {k: np.zeros(0, dtype=np.int64 if k in ("m", "n") else float) for k in cols}
    terms = TermSet(K=merged["m"] * merged["n"], **merged)
    cache[cfg] = terms
    return terms


def _check_s(s: complex) -> complex:
    s = complex(s)
    if s.real <= 1:
        warnings.warn(f"Re(s) = {s.real} <= 1: the truncated product need not converge here",
                      RuntimeWarning, stacklevel=3)
    return s


def _sigma_trace(t: TermSet, sigma: VirtualRep) -> np.ndarray:
    th, ph = t.angles
    return np.asarray(trace_at(sigma, th, ph), dtype=float) * np.ones(len(t))


def _det_n(t: TermSet) -> np.ndarray:
    th, ph = t.angles
    return det_one_minus_n_array(t.length, th, ph)


def log_selberg(sp: Spectrum, sigma: VirtualRep, s: complex, cfg: TruncationConfig = TruncationConfig()) -> complex:
    """log Z_{P,σ}(s) = -Σ χ_I (1/m) e^{-s m n_I l0} tr σ(b^{m n_I}) / det(1 - Ad((ab)^{m n_I})|n)."""
    s = _check_s(s)
    t = build_terms(sp, cfg)
    if len(t) == 0:
        return 0j
    w = t.chi / t.m * _sigma_trace(t, sigma) / _det_n(t)
    return complex(-np.sum(w * np.exp(-s * t.length)))


def log_ruelle(sp: Spectrum, sigma: VirtualRep, s: complex, cfg: TruncationConfig = TruncationConfig()) -> complex:
    s = _check_s(s)
    t = build_terms(sp, cfg)
    if len(t) == 0:
        return 0j
    w = t.chi / t.m * _sigma_trace(t, sigma)
    return complex(-np.sum(w * np.exp(-s * t.length)))


def factorization_residual(sp: Spectrum, sigma: VirtualRep, s: complex,
                           cfg: TruncationConfig = TruncationConfig()) -> complex:
    """log R_σ(s) - Σ_q (-1)^q log Z_{∧^q nbar ⊗ σ}(s + q/4)."""
    s = _check_s(s)
    total = log_ruelle(sp, sigma, s, cfg)
    for q in range(5):
        total -= (-1) ** q * log_selberg(sp, tensor(wedge_nbar(q), sigma), s + q / 4, cfg)
    return total


def dirichlet_logderiv(sp: Spectrum, sigma: VirtualRep, s: complex,
                       cfg: TruncationConfig = TruncationConfig()) -> complex:
    """Σ χ_I n_I l0 tr σ(b^K) e^{-s K l0}, the term-by-term s-derivative of log_ruelle.

    Grouped by powers K this is Σ_K χ1(Γ_{γ^K}) tr σ(b^K) l0 e^{-s K l0}.
    """
    s = _check_s(s)
    t = build_terms(sp, cfg)
    if len(t) == 0:
        return 0j
    w = t.chi * t.n * t.l0 * _sigma_trace(t, sigma)
    return complex(np.sum(w * np.exp(-s * t.length)))


def thread_count() -> int:
    env = os.environ.get("ZETA_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValueError(f"ZETA_THREADS must be an integer, got {env!r}") from None
    return min(8, os.cpu_count() or 1)


def evaluate_grid(fn: Callable[..., complex], sp: Spectrum, sigma: VirtualRep, grid: Sequence[complex],
                  cfg: TruncationConfig = TruncationConfig(), threads: Optional[int] = None) -> List[complex]:
    """Evaluate fn on every grid point; each point is independent, so results do not depend on threads."""
    build_terms(sp, cfg)
    threads = threads or thread_count()
    if threads == 1 or len(grid) < 2:
        return [fn(sp, sigma, s, cfg) for s in grid]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(lambda s: fn(sp, sigma, s, cfg), grid))


def parse_grid(spec: str) -> List[complex]:
    """'re0:re1:step[,im]' -> points re0, re0+step, ... <= re1 (inclusive up to rounding)."""
    try:
        body, _, im = spec.partition(",")
        re0, re1, step = (float(x) for x in body.split(":"))
        imag = float(im) if im else 0.0
    except ValueError:
        raise ValueError(f"bad grid {spec!r}; expected re0:re1:step[,im]") from None
    if step <= 0 or re1 < re0:
        raise ValueError(f"bad grid {spec!r}; need step > 0 and re0 <= re1")
    count = int(math.floor((re1 - re0) / step + 1e-9)) + 1
    return [complex(re0 + i * step, imag) for i in range(count)]


def write_zeta_csv(out: TextIO, grid: Sequence[complex], values: Sequence[complex],
                   residuals: Optional[Sequence[complex]] = None, kind: str = "Z") -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["s_re", "s_im", f"log{kind}_re", f"log{kind}_im", "residual_abs"])
    for i, (s, v) in enumerate(zip(grid, values)):
        res = "" if residuals is None else repr(abs(residuals[i]))
        w.writerow([repr(s.real), repr(s.imag), repr(v.real), repr(v.imag), res])
