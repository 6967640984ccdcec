"""Diagonal Cartan of sl(4): weights, the Weyl group S4, the form b and adjoint data.

Sign convention: a = exp(l*H1) with l > 0 lies in A^-; it contracts the
upper-right block n (Ad(a)|n = e^{-l/4}) and expands the lower-left block nbar.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Tuple

import numpy as np

Perm = Tuple[int, int, int, int]
Quad = Tuple[Fraction, Fraction, Fraction, Fraction]

H1: Quad = (Fraction(-1, 8), Fraction(-1, 8), Fraction(1, 8), Fraction(1, 8))
IDENTITY: Perm = (0, 1, 2, 3)
ALL_PERMS: Tuple[Perm, ...] = tuple(itertools.permutations(range(4)))  # type: ignore[assignment]


def _canonical(c: Iterable) -> Quad:
    vals = [Fraction(v) for v in c]
    if len(vals) != 4:
        raise ValueError("a Cartan functional needs exactly 4 coefficients")
    mean = sum(vals, Fraction(0)) / 4
    return tuple(v - mean for v in vals)  # type: ignore[return-value]


@dataclass(frozen=True)
class HWeight:
    """Linear functional diag(t1..t4) -> sum c_i t_i, stored modulo the trace.

    ``imag`` holds the imaginary part for complex functionals such as nu in i*a^*.
    """

    coeffs: Quad
    imag: Quad = (Fraction(0),) * 4  # type: ignore[assignment]

    def __init__(self, coeffs: Sequence, imag: Sequence | None = None) -> None:
        object.__setattr__(self, "coeffs", _canonical(coeffs))
        object.__setattr__(self, "imag", _canonical(imag if imag is not None else (0, 0, 0, 0)))

    def __add__(self, other: "HWeight") -> "HWeight":
        return HWeight(
            [a + b for a, b in zip(self.coeffs, other.coeffs)],
            [a + b for a, b in zip(self.imag, other.imag)],
        )

    def scale(self, t) -> "HWeight":
        t = Fraction(t)
        return HWeight([t * c for c in self.coeffs], [t * c for c in self.imag])

    @property
    def real(self) -> "HWeight":
        return HWeight(self.coeffs)

    def evaluate(self, diag: Sequence) -> Fraction:
        """Real part of the functional on a diagonal matrix."""
        return sum((c * Fraction(d) for c, d in zip(self.coeffs, diag)), Fraction(0))


@dataclass(frozen=True)
class AWeight:
    """A functional on the one-dimensional a, recorded by its value at H1."""

    value_at_H1: Fraction
    imag_at_H1: Fraction = Fraction(0)

    @property
    def t(self) -> Fraction:
        """Coefficient t with lambda = t * rho_P (real part)."""
        return -2 * self.value_at_H1

    @classmethod
    def from_t(cls, t) -> "AWeight":
        return cls(-Fraction(t) / 2)


def rho_P() -> HWeight:
    return HWeight((1, 1, -1, -1))


def rho_0() -> HWeight:
    """Half-sum of the positive roots of sl(4)."""
    return HWeight((Fraction(3, 2), Fraction(1, 2), Fraction(-1, 2), Fraction(-3, 2)))


def _traceless(x: Sequence) -> Quad:
    vals = tuple(Fraction(v) for v in x)
    if len(vals) != 4 or sum(vals) != 0:
        raise ValueError(f"expected a traceless diagonal of length 4, got {x!r}")
    return vals  # type: ignore[return-value]


def bform_diag(x: Sequence, y: Sequence) -> Fraction:
    """b(X, Y) = 16 tr(XY) on traceless diagonal matrices."""
    xs, ys = _traceless(x), _traceless(y)
    return 16 * sum((a * b for a, b in zip(xs, ys)), Fraction(0))


def compose(s: Perm, t: Perm) -> Perm:
    """The permutation s∘t (apply t first)."""
    return tuple(s[t[i]] for i in range(4))  # type: ignore[return-value]


def weyl_apply(perm: Sequence[int], w: HWeight) -> HWeight:
    """Action of S4 on functionals: (perm.w) has coefficient c_i in slot perm[i]."""
    p = tuple(perm)
    if sorted(p) != [0, 1, 2, 3]:
        raise ValueError(f"not a permutation of 4 symbols: {perm!r}")
    out = [Fraction(0)] * 4
    out_im = [Fraction(0)] * 4
    for i in range(4):
        out[p[i]] = w.coeffs[i]
        out_im[p[i]] = w.imag[i]
    return HWeight(out, out_im)


def restrict_to_a(w: HWeight) -> AWeight:
    re = sum((c * h for c, h in zip(w.coeffs, H1)), Fraction(0))
    im = sum((c * h for c, h in zip(w.imag, H1)), Fraction(0))
    return AWeight(re, im)


def ad_eigenvalues_nbar(l: float, theta: float, phi: float, k: int = 1) -> Tuple[complex, ...]:
    """Eigenvalues of Ad((a b)^{-k}) on nbar, phases ordered -(θ-φ), +(θ-φ), -(θ+φ), +(θ+φ)."""
    if not l > 0:
        raise ValueError("length must be positive")
    r = math.exp(-k * l / 4.0)
    d, s = k * (theta - phi), k * (theta + phi)
    return tuple(r * cmath.exp(1j * a) for a in (-d, d, -s, s))


def det_one_minus_n(l: float, theta: float, phi: float, k: int = 1) -> float:
    """det(1 - Ad((ab)^k)|n), equal to det(1 - Ad((ab)^{-k})|nbar); real and positive."""
    r = math.exp(-k * l / 4.0)
    d, s = k * (theta - phi), k * (theta + phi)
    return (1 - 2 * r * math.cos(d) + r * r) * (1 - 2 * r * math.cos(s) + r * r)


def det_one_minus_n_array(l: np.ndarray, theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Vectorised :func:`det_one_minus_n` with the power already folded into the arguments."""
    r = np.exp(-l / 4.0)
    return (1 - 2 * r * np.cos(theta - phi) + r * r) * (1 - 2 * r * np.cos(theta + phi) + r * r)


def rotation(a: float) -> np.ndarray:
    return np.array([[math.cos(a), -math.sin(a)], [math.sin(a), math.cos(a)]])


def group_element(l: float, theta: float, phi: float) -> np.ndarray:
    """The 4x4 matrix a*b with a = exp(l H1) and b = blockdiag(R(θ), R(φ))."""
    a = np.diag(np.exp(l * np.array([float(h) for h in H1])))
    b = np.zeros((4, 4))
    b[:2, :2] = rotation(theta)
    b[2:, 2:] = rotation(phi)
    return a @ b


def adjoint_block_matrix(g: np.ndarray, block: str) -> np.ndarray:
    """Matrix of X -> g X g^{-1} restricted to the upper-right ('n') or lower-left ('nbar') block."""
    if block == "n":
        basis = [(0, 2), (0, 3), (1, 2), (1, 3)]
    elif block == "nbar":
        basis = [(2, 0), (2, 1), (3, 0), (3, 1)]
    else:
        raise ValueError(block)
    ginv = np.linalg.inv(g)
    m = np.zeros((4, 4))
    for j, (r, c) in enumerate(basis):
        e = np.zeros((4, 4))
        e[r, c] = 1.0
        img = g @ e @ ginv
        m[:, j] = [img[rr, cc] for rr, cc in basis]
    return m
