"""First higher Euler characteristics and the torsion combinatorics R_γ, n_I, χ_I."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, Optional, Sequence, Tuple, Union


@dataclass(frozen=True)
class Rational:
    """The angle (p/q)·π, normalised to (-π, π] with gcd(p, q) = 1."""

    p: int
    q: int

    def __init__(self, p: int, q: int = 1) -> None:
        if q == 0:
            raise ValueError("zero denominator")
        f = Fraction(p, q)
        # bring p/q into (-1, 1]
        f = f - 2 * math.floor((f + 1) / 2)
        if f == -1:
            f = Fraction(1)
        object.__setattr__(self, "p", f.numerator)
        object.__setattr__(self, "q", f.denominator)

    @property
    def value(self) -> float:
        return math.pi * self.p / self.q

    def times(self, k: int) -> "Rational":
        return Rational(k * self.p, self.q)


@dataclass(frozen=True)
class Irrational:
    value: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.value):
            raise ValueError("angle must be finite")

    def times(self, k: int) -> "Irrational":
        return Irrational(k * self.value)


Angle = Union[Rational, Irrational]


@dataclass(frozen=True)
class AnglePair:
    theta: Angle
    phi: Angle

    @property
    def values(self) -> Tuple[float, float]:
        return self.theta.value, self.phi.value


def min_torsion_order(a: Angle) -> Optional[int]:
    """min{n >= 1 : nθ ∈ πZ}, or None when no such n exists."""
    if isinstance(a, Rational):
        return a.q
    return None


def r_gamma(a: AnglePair) -> FrozenSet[int]:
    return frozenset(n for n in (min_torsion_order(a.theta), min_torsion_order(a.phi)) if n is not None)


def is_regular_power(a: AnglePair, k: int) -> bool:
    """Whether (kθ, kφ) avoids πZ in both coordinates."""
    return all(k % r for r in r_gamma(a))


@dataclass(frozen=True)
class Chi1Table:
    """χ1(Γ_{γ^n}) at n = 1, min R (r1), max R (r2) and lcm(R).

    r1 < r2 are the sorted elements of R_γ; entries exist exactly for those that do.
    """

    chi1_1: Fraction
    chi1_r1: Optional[Fraction] = None
    chi1_r2: Optional[Fraction] = None
    chi1_lcm: Optional[Fraction] = None

    def __post_init__(self) -> None:
        for name in ("chi1_1", "chi1_r1", "chi1_r2", "chi1_lcm"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise ValueError(f"{name} must be strictly positive, got {v}")

    def check_against(self, R: Iterable[int]) -> None:
        rs = sorted(set(R))
        want = {"chi1_r1": len(rs) >= 1, "chi1_r2": len(rs) >= 2, "chi1_lcm": len(rs) >= 2}
        for name, needed in want.items():
            present = getattr(self, name) is not None
            if needed and not present:
                raise ValueError(f"{name} is required for R = {set(rs)}")
            if present and not needed:
                raise ValueError(f"{name} given but R = {set(rs) or '{}'} does not need it")

    def by_power(self, R: Iterable[int]) -> Dict[int, Fraction]:
        """Map each power n_J (J ⊆ R) to χ1(Γ_{γ^{n_J}}), checking that coinciding powers agree."""
        rs = sorted(set(R))
        self.check_against(rs)
        out: Dict[int, Fraction] = {}
        entries = [(1, self.chi1_1)]
        if rs:
            entries.append((rs[0], self.chi1_r1))
        if len(rs) == 2:
            entries += [(rs[1], self.chi1_r2), (math.lcm(*rs), self.chi1_lcm)]
        for n, v in entries:
            if n in out and out[n] != v:
                raise ValueError(f"conflicting χ1 values at power {n}: {out[n]} vs {v}")
            out[n] = v
        return out

    def scaled(self, c) -> "Chi1Table":
        f = lambda v: None if v is None else v * c  # noqa: E731
        return Chi1Table(f(self.chi1_1), f(self.chi1_r1), f(self.chi1_r2), f(self.chi1_lcm))


def chi1_from_betti(h: Sequence[int]) -> int:
    return sum((-1) ** (j + 1) * j * hj for j, hj in enumerate(h))


def chi1_index(chi1_prime, index_A: int, index_Gamma: int) -> Fraction:
    if index_A < 1 or index_Gamma < 1:
        raise ValueError("indices must be positive integers")
    return Fraction(chi1_prime) * index_A / index_Gamma


def n_of(I: Iterable[int]) -> int:
    I = list(I)
    return math.lcm(*I) if I else 1


def subsets(R: Iterable[int]):
    rs = sorted(set(R))
    for size in range(len(rs) + 1):
        for I in combinations(rs, size):
            yield frozenset(I)


def chi_I(t: Union[Chi1Table, Dict[int, Fraction]], R: Iterable[int], I: Iterable[int]) -> Fraction:
    """χ_I = ((-1)^|I| / n_I) Σ_{J ⊆ I} (-1)^|J| χ1(Γ_{γ^{n_J}})."""
    R, I = frozenset(R), frozenset(I)
    if not I <= R:
        raise ValueError(f"I = {set(I)} is not a subset of R = {set(R)}")
    table = t.by_power(R) if isinstance(t, Chi1Table) else t
    total = Fraction(0)
    for J in subsets(I):
        nJ = n_of(J)
        if nJ not in table:
            raise KeyError(f"χ1 table has no entry for the power {nJ}")
        total += (-1) ** len(J) * Fraction(table[nJ])
    return (-1) ** len(I) * total / n_of(I)


def chi1_at_power(t: Chi1Table, R: Iterable[int], k: int) -> Fraction:
    """χ1(Γ_{γ^k}) = value at lcm{r ∈ R : r | k}, the model used throughout."""
    table = t.by_power(R)
    return table[n_of(r for r in R if k % r == 0)]
