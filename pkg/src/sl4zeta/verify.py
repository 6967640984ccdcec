"""Self-contained invariant checks shared by the ``verify`` command and the test-suite."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Tuple

import numpy as np

from . import km_ring as kr
from .counting import full_torus, half_torus, weyl_mass
from .euler_char import Chi1Table, chi1_at_power, chi_I, n_of, subsets
from .inf_chars import LanglandsPi, infinitesimal_character, relevant_parameters, satisfies_region_condition, uses_upper_branch
from .spectrum import generate_pnt_like
from .zeta import TruncationConfig, factorization_residual

ASUM = (1, -3, 6, -10, 15)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail}"


def _tables() -> Check:
    bad = [f"pM^{p}" for p in range(5) if kr.exterior_power(kr.module_pM, p) != kr.wedge_pM(p)]
    bad += [f"m^{q}" for q in range(5) if kr.exterior_power(kr.module_m, q) != kr.wedge_m(q)]
    return Check("K_M exterior-power tables", not bad, "all 10 match" if not bad else f"mismatch in {bad}")


def _asum() -> Check:
    vals = [sum(ASUM[k - m] * math.comb(2, m) for m in range(k + 1)) for k in range(5)]
    return Check("alternating binomial sum", vals == [(-1) ** k for k in range(5)], f"values {vals}")


def _sigma_identity() -> Check:
    g = np.linspace(-math.pi, math.pi, 32)
    th, ph = np.meshgrid(g, g, indexing="ij")
    err = np.max(np.abs(kr.trace_at(kr.sigma_tilde(), th, ph) - 4 * (1 - np.cos(2 * th)) * (1 - np.cos(2 * ph))))
    dim = kr.sigma_tilde().dimension
    return Check("sigma-tilde trace identity", err < 1e-10 and dim == 0, f"max error {err:.2e}, dimension {dim}")


def _order_triv() -> Check:
    v = kr.vanishing_order(kr.Triv)
    return Check("vanishing order of triv at s=1 equals 2", v == 2, f"computed {v}")


def _order_tilde() -> Check:
    v = kr.sigma_tilde_order()
    return Check("vanishing order of sigma-tilde at s=1 equals 8", v == 8, f"computed {v}")


def _inf_chars() -> Check:
    bad = [p for p in relevant_parameters() if not satisfies_region_condition(infinitesimal_character(p))]
    switch = [m for m in range(1, 7) if uses_upper_branch(infinitesimal_character(LanglandsPi(m)))]
    ok = not bad and switch == [3, 4, 5, 6]
    return Check("infinitesimal-character regions", ok,
                 f"{len(relevant_parameters()) - len(bad)}/{len(relevant_parameters())} satisfy, upper branch for m in {switch}")


def _chi_telescoping() -> Check:
    t = Chi1Table(Fraction(1), Fraction(3, 2), Fraction(5, 2), Fraction(7, 3))
    ok = True
    for R in ([2, 3],):
        for k in range(1, 13):
            lhs = sum(n_of(I) * chi_I(t, R, I) for I in subsets(R) if k % n_of(I) == 0)
            ok &= lhs == chi1_at_power(t, R, k)
    return Check("chi_I telescoping over powers", bool(ok), "powers 1..12, R = {2, 3}")


def _factorization() -> Check:
    worst = 0.0
    cfg = TruncationConfig(L_max=30.0)
    for law in ("weyl", "fixed:1/2,1/3", "fixed:1/4,0"):
        sp = generate_pnt_like(2000.0, seed=1, angle_law=law)
        for sigma in (kr.Triv, kr.sigma_tilde()):
            for re in np.linspace(2.0, 4.0, 5):
                worst = max(worst, abs(factorization_residual(sp, sigma, complex(re, 0.7), cfg)))
    return Check("Ruelle-Selberg factorisation", worst < 1e-8, f"max residual {worst:.2e}")


def _weyl() -> Check:
    full, half = weyl_mass(full_torus(), 0), weyl_mass(half_torus(), 0)
    ok = abs(full - 2) < 1e-6 and abs(half - 1) < 1e-6
    return Check("Weyl mass of full and half torus", ok, f"{full:.12f}, {half:.12f}")


CHECKS: Tuple[Callable[[], Check], ...] = (
    _tables, _asum, _sigma_identity, _order_triv, _order_tilde, _inf_chars,
    _chi_telescoping, _factorization, _weyl,
)


def run_all() -> List[Check]:
    return [c() for c in CHECKS]
