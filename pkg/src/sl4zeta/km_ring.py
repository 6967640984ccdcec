"""Representation ring of K_M = S(O(2) x O(2)).

Irreducibles are Triv, Det and the two-dimensional Delta(l, k), whose restriction
to the torus SO(2) x SO(2) is e^{i(lθ+kη)} + e^{-i(lθ+kη)}.  On the reflected
coset T.(torus), T = diag(-1, 1, -1, 1), Delta has trace 0 and eigenvalues {1, -1}.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Mapping, Tuple, Union

import numpy as np

Monomial = Tuple[int, int]
Laurent = Dict[Monomial, int]


@dataclass(frozen=True, order=True)
class KMType:
    """An irreducible K_M-type: kind is 'triv', 'det' or 'delta'."""

    kind: str
    l: int = 0
    k: int = 0

    def __post_init__(self) -> None:
        if self.kind not in ("triv", "det", "delta"):
            raise ValueError(f"unknown K_M type {self.kind!r}")
        if self.kind == "delta":
            if self.l < 0 or (self.l == 0 and self.k <= 0):
                raise ValueError(f"Delta({self.l},{self.k}) is not in canonical form")
        elif self.l or self.k:
            raise ValueError("Triv and Det carry no weights")

    @property
    def dim(self) -> int:
        return 2 if self.kind == "delta" else 1

    def __str__(self) -> str:
        if self.kind == "delta":
            return f"Delta({self.l},{self.k})"
        return self.kind.capitalize()


TRIV = KMType("triv")
DET = KMType("det")


def delta_terms(l: int, k: int) -> Dict[KMType, int]:
    """Delta(l, k) in canonical form; Delta(0, 0) expands to Triv + Det."""
    if l == 0 and k == 0:
        return {TRIV: 1, DET: 1}
    if l < 0 or (l == 0 and k < 0):
        l, k = -l, -k
    return {KMType("delta", l, k): 1}


@dataclass(frozen=True)
class VirtualRep:
    """Integer combination of K_M-types; zero multiplicities are dropped."""

    terms: Tuple[Tuple[KMType, int], ...] = field(default=())

    @classmethod
    def of(cls, mapping: Union[Mapping[KMType, int], Iterable[Tuple[KMType, int]]]) -> "VirtualRep":
        acc: Counter = Counter()
        items = mapping.items() if isinstance(mapping, Mapping) else mapping
        for t, m in items:
            acc[t] += int(m)
        return cls(tuple(sorted((t, m) for t, m in acc.items() if m != 0)))

    @classmethod
    def delta(cls, l: int, k: int) -> "VirtualRep":
        return cls.of(delta_terms(l, k))

    def as_dict(self) -> Dict[KMType, int]:
        return dict(self.terms)

    def mult(self, t: KMType) -> int:
        return self.as_dict().get(t, 0)

    def __iter__(self) -> Iterator[Tuple[KMType, int]]:
        return iter(self.terms)

    def __add__(self, other: "VirtualRep") -> "VirtualRep":
        return VirtualRep.of(list(self.terms) + list(other.terms))

    def __neg__(self) -> "VirtualRep":
        return VirtualRep.of([(t, -m) for t, m in self.terms])

    def __sub__(self, other: "VirtualRep") -> "VirtualRep":
        return self + (-other)

    def __rmul__(self, n: int) -> "VirtualRep":
        return VirtualRep.of([(t, n * m) for t, m in self.terms])

    def __mul__(self, other: "VirtualRep") -> "VirtualRep":
        return tensor(self, other)

    @property
    def dimension(self) -> int:
        return sum(t.dim * m for t, m in self.terms)

    def max_weight(self) -> int:
        return max((max(t.l, abs(t.k)) for t, _ in self.terms), default=0)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{m}*{t}" if m != 1 else str(t) for t, m in self.terms)


Triv = VirtualRep.of({TRIV: 1})
Det = VirtualRep.of({DET: 1})
ZERO = VirtualRep()


def _tensor_types(a: KMType, b: KMType) -> Dict[KMType, int]:
    if a.kind != "delta" and b.kind != "delta":
        return {TRIV if a.kind == b.kind else DET: 1}
    if a.kind != "delta":
        return {b: 1}
    if b.kind != "delta":
        return {a: 1}
    out: Counter = Counter(delta_terms(a.l + b.l, a.k + b.k))
    out.update(delta_terms(a.l - b.l, a.k - b.k))
    return dict(out)


def tensor(x: VirtualRep, y: VirtualRep) -> VirtualRep:
    acc: Counter = Counter()
    for a, m in x.terms:
        for b, n in y.terms:
            for t, c in _tensor_types(a, b).items():
                acc[t] += m * n * c
    return VirtualRep.of(acc)


def _type_char(t: KMType, theta, eta, component: str):
    if component == "identity":
        if t.kind == "delta":
            return 2 * np.cos(t.l * np.asarray(theta) + t.k * np.asarray(eta))
        return np.ones_like(np.asarray(theta, dtype=float) + np.asarray(eta, dtype=float))
    if component == "reflected":
        base = np.zeros_like(np.asarray(theta, dtype=float) + np.asarray(eta, dtype=float))
        return base + {"triv": 1.0, "det": -1.0, "delta": 0.0}[t.kind]
    raise ValueError(f"component must be 'identity' or 'reflected', got {component!r}")


def character(x: VirtualRep, theta, eta, component: str = "identity"):
    """Character of x on the identity component (torus) or on the reflected coset."""
    total = 0.0
    for t, m in x.terms:
        total = total + m * _type_char(t, theta, eta, component)
    if np.ndim(total) == 0:
        return float(total)
    return total


def trace_at(x: VirtualRep, theta, phi):
    """Trace of x at b = blockdiag(R(θ), R(φ)); accepts arrays."""
    return character(x, theta, phi, "identity")


def dim_invariants(x: VirtualRep) -> int:
    return x.mult(TRIV)


# ---------------------------------------------------------------------------
# exterior powers by the character method

def _eigen_data(x: VirtualRep) -> Tuple[List[Monomial], List[int]]:
    """Torus weights (with multiplicity) and reflected-coset eigenvalues of a genuine module."""
    weights: List[Monomial] = []
    refl: List[int] = []
    for t, m in x.terms:
        if m < 0:
            raise ValueError("exterior powers need a genuine (non-virtual) module")
        for _ in range(m):
            if t.kind == "delta":
                weights += [(t.l, t.k), (-t.l, -t.k)]
                refl += [1, -1]
            else:
                weights.append((0, 0))
                refl.append(1 if t.kind == "triv" else -1)
    return weights, refl


def _elementary(values: List, q: int, mul, one):
    e = [one] + [None] * q
    for v in values:
        for j in range(q, 0, -1):
            if e[j - 1] is not None:
                term = mul(e[j - 1], v)
                e[j] = term if e[j] is None else _plus(e[j], term)
    return e[q] if e[q] is not None else None


def _plus(a, b):
    if isinstance(a, dict):
        out = Counter(a)
        out.update(b)
        return dict(out)
    return a + b


def _laurent_mul(p: Laurent, w: Monomial) -> Laurent:
    return {(a + w[0], b + w[1]): c for (a, b), c in p.items()}


def decompose(torus: Laurent, reflected_value: int) -> VirtualRep:
    """Recover a K_M-module from its torus character and its value on the reflected coset."""
    acc: Counter = Counter()
    for (l, k), c in torus.items():
        if c == 0 or (l, k) == (0, 0):
            continue
        if l > 0 or (l == 0 and k > 0):
            if torus.get((-l, -k), 0) != c:
                raise ValueError("torus character is not Weyl symmetric")
            acc[KMType("delta", l, k)] += c
    c00 = torus.get((0, 0), 0)
    if (c00 + reflected_value) % 2:
        raise ValueError("inconsistent Triv/Det data")
    acc[TRIV] += (c00 + reflected_value) // 2
    acc[DET] += (c00 - reflected_value) // 2
    return VirtualRep.of(acc)


def exterior_power(x: VirtualRep, q: int) -> VirtualRep:
    """∧^q x via elementary symmetric functions of the eigenvalues on both components."""
    weights, refl = _eigen_data(x)
    if q < 0 or q > len(weights):
        return ZERO
    if q == 0:
        return Triv
    e_t = _elementary(weights, q, _laurent_mul, {(0, 0): 1})
    e_r = _elementary(refl, q, lambda a, b: a * b, 1)
    return decompose({m: c for m, c in e_t.items() if c}, e_r)


# ---------------------------------------------------------------------------
# fixed modules

D20 = KMType("delta", 2, 0)
D02 = KMType("delta", 0, 2)
D22 = KMType("delta", 2, 2)
D2m2 = KMType("delta", 2, -2)

module_pM = VirtualRep.of({D20: 1, D02: 1})
module_m = VirtualRep.of({DET: 2, D20: 1, D02: 1})

_WEDGE_PM = (
    VirtualRep.of({TRIV: 1}),
    VirtualRep.of({D20: 1, D02: 1}),
    VirtualRep.of({DET: 2, D22: 1, D2m2: 1}),
    VirtualRep.of({D20: 1, D02: 1}),
    VirtualRep.of({TRIV: 1}),
)

# ∧^3 m carries 2 Triv + 2 Triv = 4 Triv; the dimension count is 4 + 2*8 = 20.
_WEDGE_M = (
    VirtualRep.of({TRIV: 1}),
    VirtualRep.of({DET: 2, D20: 1, D02: 1}),
    VirtualRep.of({TRIV: 1, DET: 2, D20: 2, D02: 2, D22: 1, D2m2: 1}),
    VirtualRep.of({TRIV: 4, D20: 2, D02: 2, D22: 2, D2m2: 2}),
    VirtualRep.of({TRIV: 1, DET: 2, D20: 2, D02: 2, D22: 1, D2m2: 1}),
)


def _check_index(q: int) -> None:
    if not isinstance(q, (int, np.integer)) or not 0 <= q <= 4:
        raise ValueError(f"exterior degree must be in 0..4, got {q!r}")


def wedge_pM(p: int) -> VirtualRep:
    _check_index(p)
    return _WEDGE_PM[p]


def wedge_m(q: int) -> VirtualRep:
    _check_index(q)
    return _WEDGE_M[q]


def module_n() -> VirtualRep:
    """n (and nbar) as a K_M-module: b acts with phases ±(θ+φ), ±(θ-φ)."""
    return VirtualRep.of({KMType("delta", 1, 1): 1, KMType("delta", 1, -1): 1})


def wedge_nbar(q: int) -> VirtualRep:
    _check_index(q)
    return exterior_power(module_n(), q)


SIGMA_TILDE_COEFFS = (15, -10, 6, -3, 1)


def sigma_tilde() -> VirtualRep:
    out = ZERO
    for q, a in enumerate(SIGMA_TILDE_COEFFS):
        out = out + a * wedge_m(q)
    return out


def vanishing_order(sigma: VirtualRep) -> int:
    """sum_p (-1)^p dim(∧^p p_M ⊗ sigma)^{K_M}."""
    return sum((-1) ** p * dim_invariants(tensor(wedge_pM(p), sigma)) for p in range(5))


def sigma_tilde_order() -> int:
    """sum_{p,q} (-1)^{p+q} a'_q dim(∧^p p_M ⊗ ∧^q m)^{K_M} with a' = (15, 10, 6, 3, 1)."""
    a_prime = (15, 10, 6, 3, 1)
    return sum(
        (-1) ** (p + q) * a_prime[q] * dim_invariants(tensor(wedge_pM(p), wedge_m(q)))
        for p in range(5)
        for q in range(5)
    )


# ---------------------------------------------------------------------------
# Euler-Poincaré traces

def xi_types(m1: int, m2: int, cutoff: int) -> Dict[KMType, int]:
    """K_M-types of the discrete-series parameter (m1, m2), truncated at weight ``cutoff``."""
    out: Counter = Counter()
    if m1 < 0 or m2 < 0:
        raise ValueError("m1, m2 must be non-negative")
    if m1 == 0 and m2 == 0:
        return {TRIV: 1}
    if m1 == 0:
        for k in range(m2, cutoff + 1, 2):
            out.update(delta_terms(0, k))
    elif m2 == 0:
        for j in range(m1, cutoff + 1, 2):
            out.update(delta_terms(j, 0))
    else:
        for j in range(m1, cutoff + 1, 2):
            for k in range(m2, cutoff + 1, 2):
                out.update(delta_terms(j, k))
                out.update(delta_terms(-j, k))
    return dict(out)


def ep_trace(m1: int, m2: int, sigma: VirtualRep, cutoff: int | None = None) -> int:
    """sum_p (-1)^p dim(V_xi ⊗ ∧^p p_M ⊗ sigma)^{K_M} with V_xi truncated at ``cutoff``.

    All K_M-types are self-dual, so an invariant pairs a type of V_xi with the same
    type in ∧^p p_M ⊗ sigma; the truncation is exact once the cutoff reaches the
    largest weight there.
    """
    alt = ZERO
    for p in range(5):
        alt = alt + (-1) ** p * tensor(wedge_pM(p), sigma)
    needed = alt.max_weight()
    if cutoff is None:
        cutoff = max(needed, m1, m2)
    elif cutoff < needed:
        raise ValueError(f"cutoff {cutoff} too small: types of weight {needed} can still pair")
    v = xi_types(m1, m2, cutoff)
    return sum(m * v.get(t, 0) for t, m in alt.terms)


def ep_trace_sl2(n: int, cutoff: int = 32) -> int:
    """SL(2) analogue: sum_p (-1)^p dim(V_n ⊗ ∧^p p)^{SO(2)} for D_n^+ ⊕ D_n^-.

    SO(2)-weights of V_n are k with |k| >= n, k ≡ n mod 2; p has weights ±2.
    """
    wedge = [Counter({0: 1}), Counter({2: 1, -2: 1}), Counter({0: 1})]
    v = [k for k in range(-cutoff, cutoff + 1) if abs(k) >= n and (k - n) % 2 == 0]
    total = 0
    for p, wp in enumerate(wedge):
        total += (-1) ** p * sum(c for w, c in wp.items() for k in v if k + w == 0)
    return total


def character_average(x: VirtualRep, points: int = 2048) -> float:
    """Haar average of the character over K_M by the composite trapezoid rule."""
    g = 2 * math.pi * np.arange(points) / points
    th, et = np.meshgrid(g, g, indexing="ij")
    ident = float(np.mean(character(x, th, et, "identity")))
    refl = float(np.mean(character(x, g, 0.0 * g, "reflected")))
    return 0.5 * (ident + refl)
