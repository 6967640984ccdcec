"""Synthetic primitive length spectra: generation, validation and JSON-lines persistence."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Optional, Tuple, Union

import numpy as np

from .euler_char import AnglePair, Angle, Chi1Table, Irrational, Rational, r_gamma
from .logint import li_fast, li_inverse

MIN_NORM = 2.0


class SpectrumError(ValueError):
    """A spectrum record or collection violates the format or an invariant."""


@dataclass(frozen=True)
class PrimitiveClass:
    l0: float
    angles: AnglePair
    chi: Chi1Table

    def validate(self) -> None:
        if not (math.isfinite(self.l0) and self.l0 > 0):
            raise SpectrumError(f"l0 must be positive, got {self.l0}")
        try:
            self.chi.check_against(r_gamma(self.angles))
        except ValueError as exc:
            raise SpectrumError(str(exc)) from None

    @property
    def R(self) -> List[int]:
        return sorted(r_gamma(self.angles))


@dataclass(frozen=True)
class Spectrum:
    classes: Tuple[PrimitiveClass, ...]
    meta: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "classes", tuple(self.classes))
        prev = 0.0
        for i, c in enumerate(self.classes):
            try:
                c.validate()
            except SpectrumError as exc:
                raise SpectrumError(f"class {i}: {exc}") from None
            if c.l0 < prev:
                raise SpectrumError(f"class {i}: lengths must be sorted ascending")
            prev = c.l0

    def __len__(self) -> int:
        return len(self.classes)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Spectrum):
            return NotImplemented
        return self.classes == other.classes and dict(self.meta) == dict(other.meta)

    def __hash__(self) -> int:
        return hash(self.classes)

    @cached_property
    def arrays(self) -> "SpectrumArrays":
        return SpectrumArrays.build(self.classes)

    def with_classes(self, classes: Iterable[PrimitiveClass]) -> "Spectrum":
        return Spectrum(tuple(sorted(classes, key=lambda c: c.l0)), dict(self.meta))


@dataclass(frozen=True)
class SpectrumArrays:
    """Column view of a spectrum for vectorised evaluation.

    Denominators ``tq``/``pq`` are 0 for irrational angles; ``r1 < r2`` are the
    sorted elements of R (0 when absent) and ``c*`` the χ1 table entries.
    """

    l0: np.ndarray
    theta: np.ndarray
    phi: np.ndarray
    tq: np.ndarray
    pq: np.ndarray
    r1: np.ndarray
    r2: np.ndarray
    c1: np.ndarray
    cr1: np.ndarray
    cr2: np.ndarray
    clcm: np.ndarray

    @classmethod
    def build(cls, classes: Tuple[PrimitiveClass, ...]) -> "SpectrumArrays":
        n = len(classes)
        cols = {k: np.zeros(n) for k in ("l0", "theta", "phi", "c1", "cr1", "cr2", "clcm")}
        ints = {k: np.zeros(n, dtype=np.int64) for k in ("tq", "pq", "r1", "r2")}
        for i, c in enumerate(classes):
            cols["l0"][i] = c.l0
            cols["theta"][i], cols["phi"][i] = c.angles.values
            ints["tq"][i] = c.angles.theta.q if isinstance(c.angles.theta, Rational) else 0
            ints["pq"][i] = c.angles.phi.q if isinstance(c.angles.phi, Rational) else 0
            R = c.R
            if R:
                ints["r1"][i] = R[0]
            if len(R) > 1:
                ints["r2"][i] = R[1]
            cols["c1"][i] = float(c.chi.chi1_1)
            for key, val in (("cr1", c.chi.chi1_r1), ("cr2", c.chi.chi1_r2), ("clcm", c.chi.chi1_lcm)):
                cols[key][i] = 0.0 if val is None else float(val)
        return cls(**cols, **ints)

    def regular(self, k: np.ndarray | int) -> np.ndarray:
        """Mask of classes whose k-th power is regular (kθ, kφ ∉ πZ)."""
        k = np.asarray(k)
        ok_t = (self.tq == 0) | (k % np.where(self.tq == 0, 1, self.tq) != 0)
        ok_p = (self.pq == 0) | (k % np.where(self.pq == 0, 1, self.pq) != 0)
        return ok_t & ok_p

    def chi1_power(self, k: np.ndarray | int) -> np.ndarray:
        """χ1(Γ_{γ^k}) under the lcm model: the table value at lcm{r ∈ R : r | k}."""
        k = np.asarray(k)
        d1 = (self.r1 > 0) & (k % np.where(self.r1 == 0, 1, self.r1) == 0)
        d2 = (self.r2 > 0) & (k % np.where(self.r2 == 0, 1, self.r2) == 0)
        return np.where(d1 & d2, self.clcm, np.where(d1, self.cr1, np.where(d2, self.cr2, self.c1)))


# ---------------------------------------------------------------------------
# generation

_ONE = Fraction(1)


def _sample_sin2(rng: np.random.Generator, n: int) -> np.ndarray:
    """Draw n angles in (-π, π] with density ∝ sin² by rejection from the uniform law."""
    out = np.empty(0)
    while out.size < n:
        m = 2 * (n - out.size) + 64
        cand = rng.uniform(-math.pi, math.pi, m)
        keep = rng.uniform(0.0, 1.0, m) < np.sin(cand) ** 2
        out = np.concatenate([out, cand[keep]])
    return out[:n]


def parse_angle_law(law: Union[str, AnglePair]) -> Union[str, AnglePair]:
    """'weyl', 'uniform' or 'fixed:p/q,p/q' (multiples of π)."""
    if isinstance(law, AnglePair):
        return law
    if law in ("weyl", "weyl_measure"):
        return "weyl"
    if law == "uniform":
        return law
    if law.startswith("fixed:"):
        try:
            parts = law[len("fixed:"):].split(",")
            t, p = (Fraction(x.strip()) for x in parts)
        except (ValueError, ZeroDivisionError):
            raise SpectrumError(f"bad fixed angle law {law!r}; expected fixed:p/q,p/q") from None
        return AnglePair(Rational(t.numerator, t.denominator), Rational(p.numerator, p.denominator))
    raise SpectrumError(f"unknown angle law {law!r}; use weyl, uniform or fixed:p/q,p/q")


def _chi_for(R) -> Chi1Table:
    n = len(R)
    return Chi1Table(_ONE, _ONE if n >= 1 else None, _ONE if n == 2 else None, _ONE if n == 2 else None)


def generate_pnt_like(x_max: float, seed: int = 0, constant: float = 2.0,
                      angle_law: Union[str, AnglePair] = "weyl") -> Spectrum:
    """Norms N_k = li^{-1}(k/constant) up to x_max, so that π(x) = ⌊constant·li(x)⌋.

    χ1 ≡ 1; angles are independent of lengths and drawn from ``angle_law``.
    """
    if not constant > 0:
        raise SpectrumError("constant must be positive")
    if not x_max > MIN_NORM:
        raise SpectrumError("x_max must exceed 2")
    count = int(math.floor(constant * float(li_fast(x_max))))
    if count < 1:
        raise SpectrumError(f"x_max = {x_max} is too small to contain a class at constant {constant}")
    norms = li_inverse(np.arange(1, count + 1) / constant)
    norms = norms[norms <= x_max]
    lengths = np.log(norms)
    law = parse_angle_law(angle_law)
    rng = np.random.default_rng(seed)
    n = lengths.size
    if isinstance(law, AnglePair):
        pairs = [law] * n
    else:
        if law == "weyl":
            th, ph = _sample_sin2(rng, n), _sample_sin2(rng, n)
        else:
            th, ph = rng.uniform(-math.pi, math.pi, n), rng.uniform(-math.pi, math.pi, n)
        pairs = [AnglePair(Irrational(float(a)), Irrational(float(b))) for a, b in zip(th, ph)]
    cache: Dict[Tuple[int, ...], Chi1Table] = {}
    classes = []
    for l0, ap in zip(lengths.tolist(), pairs):
        R = tuple(sorted(r_gamma(ap)))
        if R not in cache:
            cache[R] = _chi_for(R)
        classes.append(PrimitiveClass(l0, ap, cache[R]))
    meta = {"generator": "pnt_like", "seed": int(seed), "constant": float(constant),
            "x_max": float(x_max), "angle_law": law if isinstance(law, str) else "fixed"}
    return Spectrum(tuple(classes), meta)


# ---------------------------------------------------------------------------
# persistence

def _angle_to_json(a: Angle):
    if isinstance(a, Rational):
        return [a.p, a.q]
    return {"irr": a.value}


def _num_to_json(v: Fraction):
    v = Fraction(v)
    return v.numerator if v.denominator == 1 else [v.numerator, v.denominator]


def class_to_json(c: PrimitiveClass) -> Dict[str, Any]:
    rec: Dict[str, Any] = {"l0": c.l0, "theta": _angle_to_json(c.angles.theta),
                           "phi": _angle_to_json(c.angles.phi), "chi1": _num_to_json(c.chi.chi1_1)}
    for key in ("chi1_r1", "chi1_r2", "chi1_lcm"):
        val = getattr(c.chi, key)
        if val is not None:
            rec[key] = _num_to_json(val)
    return rec


def save(s: Spectrum, path: Union[str, Path]) -> None:
    lines = [json.dumps({"meta": dict(s.meta)}, sort_keys=True)]
    lines += [json.dumps(class_to_json(c)) for c in s.classes]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _parse_angle(v: Any, where: str) -> Angle:
    if isinstance(v, list) and len(v) == 2 and all(isinstance(x, int) for x in v):
        if v[1] < 1:
            raise SpectrumError(f"{where}: denominator must be >= 1")
        return Rational(v[0], v[1])
    if isinstance(v, dict) and set(v) == {"irr"} and isinstance(v["irr"], (int, float)):
        return Irrational(float(v["irr"]))
    raise SpectrumError(f"{where}: expected [p, q] or {{\"irr\": float}}, got {v!r}")


def _parse_num(v: Any, where: str) -> Fraction:
    if isinstance(v, bool):
        raise SpectrumError(f"{where}: expected a number, got {v!r}")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, float) and math.isfinite(v):
        return Fraction(v)
    if isinstance(v, list) and len(v) == 2 and all(isinstance(x, int) for x in v) and v[1] > 0:
        return Fraction(v[0], v[1])
    raise SpectrumError(f"{where}: expected a number or [p, q], got {v!r}")


def load(path: Union[str, Path]) -> Spectrum:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SpectrumError(f"cannot read spectrum file {path}: {exc.strerror}") from None
    meta: Dict[str, Any] = {}
    classes: List[PrimitiveClass] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise SpectrumError(f"line {lineno}: invalid JSON ({exc.msg})") from None
        if not isinstance(rec, dict):
            raise SpectrumError(f"line {lineno}: expected a JSON object")
        if "meta" in rec:
            if lineno != 1 or not isinstance(rec["meta"], dict):
                raise SpectrumError(f"line {lineno}: field 'meta' must be an object on the first line")
            meta = rec["meta"]
            continue
        for key in ("l0", "theta", "phi", "chi1"):
            if key not in rec:
                raise SpectrumError(f"line {lineno}: missing field '{key}'")
        unknown = set(rec) - {"l0", "theta", "phi", "chi1", "chi1_r1", "chi1_r2", "chi1_lcm"}
        if unknown:
            raise SpectrumError(f"line {lineno}: unknown field '{sorted(unknown)[0]}'")
        l0 = rec["l0"]
        if isinstance(l0, bool) or not isinstance(l0, (int, float)):
            raise SpectrumError(f"line {lineno}: field 'l0' must be a number")
        angles = AnglePair(_parse_angle(rec["theta"], f"line {lineno}: field 'theta'"),
                           _parse_angle(rec["phi"], f"line {lineno}: field 'phi'"))
        nums = {k: _parse_num(rec[k], f"line {lineno}: field '{k}'")
                for k in ("chi1", "chi1_r1", "chi1_r2", "chi1_lcm") if k in rec}
        try:
            chi = Chi1Table(nums["chi1"], nums.get("chi1_r1"), nums.get("chi1_r2"), nums.get("chi1_lcm"))
        except ValueError as exc:
            raise SpectrumError(f"line {lineno}: {exc}") from None
        classes.append(PrimitiveClass(float(l0), angles, chi))
    return Spectrum(tuple(classes), meta)
