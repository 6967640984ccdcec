"""Infinitesimal characters of the unitary dual of SL(4, R) and their restrictions to a.

On a* the rho_P-order is read through the value at H1.  Because rho_P(H1) = -1/2,
mu = t*rho_P has value -t/2, so "mu >= -rho_P/2" means value <= 1/4 and
"mu <= -rho_P" means value >= 1/2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, List, Union

from .cartan import ALL_PERMS, AWeight, HWeight, rho_0, rho_P, restrict_to_a, weyl_apply

LOWER_BRANCH = Fraction(1, 4)
UPPER_BRANCH = Fraction(1, 2)
LONG_ELEMENT = (3, 2, 1, 0)


@dataclass(frozen=True)
class PrincipalDS:
    """Induced from P with discrete-series data (m1, m2) on M and nu = i*alpha*rho_P/4.

    ``alpha`` is the imaginary part, an exact rational.  m = 0 stands for the trivial SL(2) factor.
    """

    m1: int
    m2: int
    alpha: Fraction = Fraction(0)


@dataclass(frozen=True)
class Complementary:
    m: int
    t: Fraction

    def __post_init__(self) -> None:
        if not 0 < Fraction(self.t) < Fraction(1, 2):
            raise ValueError(f"complementary series needs 0 < t < 1/2, got {self.t}")


@dataclass(frozen=True)
class LanglandsPi:
    """The Langlands quotient pi_m (and the limit of complementary series, which shares Λ)."""

    m: int


@dataclass(frozen=True)
class TrivialRep:
    pass


@dataclass(frozen=True)
class InducedOther:
    """Induced from P0, P' or P''; contributes no zeros or poles, so no Λ is computed."""

    label: str = ""


ReprParam = Union[PrincipalDS, Complementary, LanglandsPi, TrivialRep, InducedOther]


def _sl2_factor(m: int) -> Fraction:
    if m < 0:
        raise ValueError("discrete-series parameters are non-negative")
    # m = 0 is the trivial rep, whose infinitesimal character is rho of sl(2)
    return Fraction(m - 1) if m >= 1 else Fraction(1)


def lambda_xi(m1: int, m2: int) -> HWeight:
    """Λ_ξ(diag(s,-s,t,-t)) = (m1-1)s + (m2-1)t, extended by zero on a."""
    f1, f2 = _sl2_factor(m1), _sl2_factor(m2)
    return HWeight((f1 / 2, -f1 / 2, f2 / 2, -f2 / 2))


def infinitesimal_character(p: ReprParam) -> HWeight:
    if isinstance(p, PrincipalDS):
        nu = HWeight((0, 0, 0, 0), rho_P().scale(Fraction(p.alpha) / 4).coeffs)
        return lambda_xi(p.m1, p.m2) + nu
    if isinstance(p, Complementary):
        return lambda_xi(p.m, p.m) + rho_P().scale(p.t)
    if isinstance(p, LanglandsPi):
        return lambda_xi(p.m, p.m) + rho_P().scale(Fraction(1, 2))
    if isinstance(p, TrivialRep):
        return rho_0()
    if isinstance(p, InducedOther):
        raise ValueError("representations induced from other parabolics carry no relevant Λ")
    raise TypeError(f"unknown representation parameter {p!r}")


def weyl_restrictions(lam: HWeight) -> List[AWeight]:
    """Real parts of (wΛ)|_a for the 24 elements of S4, in itertools order."""
    return [AWeight(restrict_to_a(weyl_apply(w, lam)).value_at_H1) for w in ALL_PERMS]


def in_region(mu: AWeight) -> bool:
    v = mu.value_at_H1
    return v <= LOWER_BRANCH or v >= UPPER_BRANCH


def satisfies_region_condition(lam: HWeight) -> bool:
    return all(in_region(mu) for mu in weyl_restrictions(lam))


def uses_upper_branch(lam: HWeight) -> bool:
    """True when some restriction lies in the mu <= -rho_P branch."""
    return any(mu.value_at_H1 >= UPPER_BRANCH for mu in weyl_restrictions(lam))


def candidate_zeros(lam: HWeight) -> FrozenSet[Fraction]:
    """{(wΛ|_a)(H1) + 1/2 : w in S4}; the shift is -rho_P(H1)."""
    return frozenset(mu.value_at_H1 + UPPER_BRANCH for mu in weyl_restrictions(lam))


def relevant_parameters() -> List[ReprParam]:
    """Finite list of parameters whose Euler-Poincaré traces can be non-zero."""
    out: List[ReprParam] = [PrincipalDS(a, b) for a in (0, 2, 4) for b in (0, 2, 4)]
    out += [Complementary(m, Fraction(t, 8)) for m in (2, 4) for t in (1, 2, 3)]
    out += [LanglandsPi(m) for m in range(1, 7)]
    out.append(TrivialRep())
    return out
