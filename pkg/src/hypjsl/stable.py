"""Stable lengths, joint stable lengths, and certified brackets.

The stable length of an isometry f is lim |f^n x - x| / n; the joint
stable length of a finite set S is the same limit for the worst product of
n elements.  Neither limit is computable directly, but both are squeezed
between

* a subadditive upper bound, min over m of the length-m displacement
  over m, and
* lower bounds from the displacement-doubling inequalities
  (|f^2m x - x| - |f^m x - x| - 2 delta) / m for one isometry and
  (|S^2m x|  - |S^m x|  - 6 delta) / m for a set, plus the Berger-Wang
  route: the exact stable length of any length-m product divided by m.

All brackets are certified to contain the true value; the lower bounds are
clamped at zero since stable lengths are nonnegative in every model here.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .exceptions import BudgetExceededError, ModelMismatchError
from .mat2 import Mat2, ScaledProduct
from .models import (
    DELTA_FREE,
    DELTA_H2,
    EuclidIsometry,
    FreeWord,
    H2Isometry,
    HPoint,
    IsoClass,
    basepoint_conjugator,
    free_distance,
    h2_distance,
)

__all__ = [
    "DEFAULT_BUDGET",
    "Bracket",
    "IsometrySet",
    "SemigroupVerdict",
    "MinLengthReport",
    "displacement",
    "set_power",
    "stable_length_bracket",
    "jsl_bracket",
    "classify_semigroup",
    "product_hyperbolicity_bound",
    "min_length_report",
]

DEFAULT_BUDGET = 2_000_000

# bracket provenance tags
LO_DOUBLING = "doubling"          # |f^2m x - x| - |f^m x - x| - 2 delta
LO_SET_DOUBLING = "set-doubling"  # |S^2m x| - |S^m x| - 6 delta
LO_BERGER_WANG = "berger-wang"    # exact stable length of a product / m
LO_EXACT = "exact"                # model fact: stable lengths are >= 0
HI_SUBADDITIVE = "subadditive"
HI_EXACT = "exact"


@dataclass(frozen=True, slots=True)
class Bracket:
    """Certified interval [lo, hi] around a (joint) stable length."""

    lo: float
    hi: float
    depth: int
    delta: float
    lo_source: str
    hi_source: str

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("bracket depth must be >= 1")
        if self.delta < 0.0:
            raise ValueError("delta must be nonnegative")
        if self.lo > self.hi + 1e-9:
            raise ValueError("bracket lower end %r exceeds upper end %r" % (self.lo, self.hi))

    def contains(self, value: float, margin: float = 0.0) -> bool:
        return self.lo - margin <= value <= self.hi + margin

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def to_dict(self) -> dict:
        return {
            "lo": self.lo,
            "hi": self.hi,
            "depth": self.depth,
            "delta": self.delta,
            "lo_source": self.lo_source,
            "hi_source": self.hi_source,
        }


def _model_of(f) -> str:
    if isinstance(f, H2Isometry):
        return "h2"
    if isinstance(f, FreeWord):
        return "free"
    if isinstance(f, EuclidIsometry):
        return "euclid"
    raise ModelMismatchError("not a model isometry: %r" % (f,))


def _check_point(model: str, x):
    if model == "h2":
        if not isinstance(x, HPoint):
            raise ModelMismatchError("half-plane isometries need an HPoint basepoint")
        return x
    if model == "free":
        if not isinstance(x, FreeWord):
            raise ModelMismatchError("free-group isometries need a FreeWord basepoint")
        return x
    if isinstance(x, (int, float)):
        x = complex(x)
    if not isinstance(x, complex):
        raise ModelMismatchError("plane isometries need a complex basepoint")
    return x


def default_basepoint(model: str):
    if model == "h2":
        return HPoint.base()
    if model == "free":
        return FreeWord()
    return 0j


def model_delta(model: str) -> float | None:
    """Hyperbolicity constant, or None for the non-hyperbolic plane model."""
    if model == "h2":
        return DELTA_H2
    if model == "free":
        return DELTA_FREE
    return None


def _displacement_at(f, x) -> float:
    if isinstance(f, H2Isometry):
        return f.displacement(x)
    if isinstance(f, FreeWord):
        return float(f.displacement(x))
    return f.displacement(x)


def _exact_stable_length(f) -> float:
    return float(f.stable_length())


def _compose(f, g):
    if isinstance(f, FreeWord):
        return f.mul(g)
    return f.compose(g)


def _distance(model: str, x, y) -> float:
    if model == "h2":
        return h2_distance(x, y)
    if model == "free":
        return float(free_distance(x, y))
    return abs(x - y)


def _canonical_key(f):
    if isinstance(f, FreeWord):
        return f.letters
    return f.canonical_key()


@dataclass(frozen=True, slots=True)
class IsometrySet:
    """Finite nonempty set of isometries of one model, deduplicated."""

    model: str
    elements: tuple

    def __post_init__(self):
        if self.model not in ("h2", "free", "euclid"):
            raise ValueError("unknown model %r" % self.model)
        if not self.elements:
            raise ValueError("isometry set must be nonempty")
        for f in self.elements:
            if _model_of(f) != self.model:
                raise ModelMismatchError("element %r does not belong to model %s" % (f, self.model))

    @staticmethod
    def _dedup(elements) -> tuple:
        seen = {}
        for f in elements:
            seen.setdefault(_canonical_key(f), f)
        return tuple(seen.values())

    @classmethod
    def from_matrices(cls, mats) -> "IsometrySet":
        isos = [H2Isometry.from_matrix(m if isinstance(m, Mat2) else Mat2(*m)) for m in mats]
        return cls("h2", cls._dedup(isos))

    @classmethod
    def from_words(cls, words) -> "IsometrySet":
        ws = [w if isinstance(w, FreeWord) else FreeWord.parse(w) for w in words]
        return cls("free", cls._dedup(ws))

    @classmethod
    def from_euclid(cls, isos) -> "IsometrySet":
        return cls("euclid", cls._dedup(tuple(isos)))

    def __len__(self) -> int:
        return len(self.elements)


def displacement(s: IsometrySet, x) -> float:
    """|S|_x: the largest displacement of the basepoint over the set."""
    x = _check_point(s.model, x)
    return max(_displacement_at(f, x) for f in s.elements)


def _check_budget(k: int, depth: int, budget: int):
    if k ** depth > budget:
        raise BudgetExceededError(
            "%d^%d products exceed the budget of %d" % (k, depth, budget)
        )


def set_power(s: IsometrySet, n: int, budget: int = DEFAULT_BUDGET) -> IsometrySet:
    """All products of exactly n elements, deduplicated by canonical form."""
    if n < 1:
        raise ValueError("power must be >= 1")
    _check_budget(len(s), n, budget)
    level = {_canonical_key(f): f for f in s.elements}
    for _ in range(n - 1):
        nxt = {}
        for f in level.values():
            for g in s.elements:
                h = _compose(f, g)
                nxt.setdefault(_canonical_key(h), h)
        level = nxt
    return IsometrySet(s.model, tuple(level.values()))


def _power_displacements(f, x, count: int) -> list[float]:
    """[|f^m x - x| for m = 1..count], overflow-safe per model."""
    if isinstance(f, H2Isometry):
        s = basepoint_conjugator(x)
        conj = s @ f.m @ s.inverse()
        out = []
        p = ScaledProduct.start()
        for _ in range(count):
            p = p.extend(conj)
            out.append(2.0 * max(p.log_norm, 0.0))
        return out
    if isinstance(f, FreeWord):
        out = []
        fm = FreeWord()
        for _ in range(count):
            fm = fm.mul(f)
            out.append(float(fm.displacement(x)))
        return out
    out = []
    z = x
    for _ in range(count):
        z = f.apply(z)
        out.append(abs(z - x))
    return out


def stable_length_bracket(f, x=None, n: int = 8, delta: float | None = None) -> Bracket:
    """Certified bracket for the stable length of a single isometry.

    Upper end: min over m <= n of |f^m x - x| / m.  Lower end: the
    displacement-doubling bound (hyperbolic models), clamped at zero.
    """
    if n < 1:
        raise ValueError("depth must be >= 1")
    model = _model_of(f)
    x = default_basepoint(model) if x is None else _check_point(model, x)
    if delta is None:
        delta = model_delta(model)
    disp = _power_displacements(f, x, 2 * n)

    hi = math.inf
    for m in range(1, n + 1):
        hi = min(hi, disp[m - 1] / m)

    lo = 0.0
    lo_source = LO_EXACT
    if delta is not None:
        for m in range(1, n + 1):
            cand = (disp[2 * m - 1] - disp[m - 1] - 2.0 * delta) / m
            if cand > lo:
                lo = cand
                lo_source = LO_DOUBLING

    if model == "h2":
        exact = f.stable_length()
        if not (lo - 1e-6 <= exact <= hi + 1e-6):
            raise AssertionError(
                "bracket [%r, %r] misses the exact stable length %r" % (lo, hi, exact)
            )

    return Bracket(lo, hi, n, delta if delta is not None else 0.0, lo_source, HI_SUBADDITIVE)


def _scan_set(s: IsometrySet, x, depth: int, budget: int):
    """(disp, dinf): per length m <= depth, the largest displacement of x
    and the largest exact stable length over all length-m products."""
    _check_budget(len(s), depth, budget)
    if s.model == "h2":
        conj = basepoint_conjugator(x)
        conj_inv = conj.inverse()
        gens = np.array(
            [(conj @ f.m @ conj_inv).entries() for f in s.elements], dtype=np.float64
        )
        max_log_norm, max_log_rho = _backend.product_scan(gens, depth)
        disp = [2.0 * max(v, 0.0) for v in max_log_norm]
        dinf = [2.0 * max(v, 0.0) for v in max_log_rho]
        return disp, dinf
    disp = []
    dinf = []
    level = {_canonical_key(f): f for f in s.elements}
    for _ in range(depth):
        disp.append(max(_displacement_at(f, x) for f in level.values()))
        dinf.append(max(_exact_stable_length(f) for f in level.values()))
        nxt = {}
        for f in level.values():
            for g in s.elements:
                h = _compose(f, g)
                nxt.setdefault(_canonical_key(h), h)
        level = nxt
    return disp, dinf


def jsl_bracket(
    s: IsometrySet,
    x=None,
    n: int = 6,
    delta: float | None = None,
    budget: int = DEFAULT_BUDGET,
) -> Bracket:
    """Certified bracket for the joint stable length of a finite set.

    Products up to length 2n are scanned: the upper end is subadditive,
    the lower end the better of the set-doubling bound and the Berger-Wang
    bound (exact stable length of the best product of each length).
    """
    if n < 1:
        raise ValueError("depth must be >= 1")
    x = default_basepoint(s.model) if x is None else _check_point(s.model, x)
    if delta is None:
        delta = model_delta(s.model)
    disp, dinf = _scan_set(s, x, 2 * n, budget)

    hi = math.inf
    for m in range(1, n + 1):
        hi = min(hi, disp[m - 1] / m)

    lo = 0.0
    lo_source = LO_EXACT
    for m in range(1, n + 1):
        bw = dinf[m - 1] / m
        if bw > lo:
            lo = bw
            lo_source = LO_BERGER_WANG
    if delta is not None:
        for m in range(1, n + 1):
            cand = (disp[2 * m - 1] - disp[m - 1] - 6.0 * delta) / m
            if cand > lo:
                lo = cand
                lo_source = LO_SET_DOUBLING

    return Bracket(lo, hi, n, delta if delta is not None else 0.0, lo_source, HI_SUBADDITIVE)


@dataclass(frozen=True, slots=True)
class SemigroupVerdict:
    """Outcome of the semigroup hyperbolicity search.

    ``certificate`` is the first word (shortest, then lexicographic over
    generator indices) whose exact stable length is positive; when no such
    word exists up to the searched depth the verdict stays undetermined --
    distinguishing elliptic from parabolic semigroups is not decidable
    from finitely many orbit points.
    """

    hyperbolic: bool
    certificate: tuple[int, ...] | None = None
    depth_searched: int | None = None
    jsl_upper_bound: float | None = None

    def to_dict(self) -> dict:
        return {
            "hyperbolic": self.hyperbolic,
            "certificate": None
            if self.certificate is None
            else "".join(str(i) for i in self.certificate),
            "depth_searched": self.depth_searched,
            "jsl_upper_bound": self.jsl_upper_bound,
        }


def classify_semigroup(
    s: IsometrySet, depth: int = 6, budget: int = DEFAULT_BUDGET
) -> SemigroupVerdict:
    """Search for a hyperbolic element among products of length <= depth.

    The generated semigroup is hyperbolic iff the joint stable length is
    positive, which happens iff some finite product is a hyperbolic
    isometry; the certificate records the first such product found.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    _check_budget(len(s), depth, budget)
    for m in range(1, depth + 1):
        for word in itertools.product(range(len(s)), repeat=m):
            g = s.elements[word[0]]
            for i in word[1:]:
                g = _compose(g, s.elements[i])
            if _exact_stable_length(g) > 1e-9:
                return SemigroupVerdict(True, certificate=word)
    x = default_basepoint(s.model)
    disp, _ = _scan_set(s, x, depth, budget)
    hi = min(disp[m - 1] / m for m in range(1, depth + 1))
    return SemigroupVerdict(False, depth_searched=depth, jsl_upper_bound=hi)


def product_hyperbolicity_bound(f, g, x=None, k: float = 7.0 * DELTA_H2, delta: float | None = None):
    """Certified lower bound for the stable length of fg, when applicable.

    If |fx - gx| > max(|fx - x| + slen(g), |gx - x| + slen(f)) + k with
    k >= 7 delta, then fg is hyperbolic with stable length greater than
    slen(f) + slen(g) + 2k - 14 delta.  Returns that bound, or None when
    the separation hypothesis fails.
    """
    model = _model_of(f)
    if _model_of(g) != model:
        raise ModelMismatchError("f and g live in different models")
    x = default_basepoint(model) if x is None else _check_point(model, x)
    if delta is None:
        delta = model_delta(model)
    if delta is None:
        raise ModelMismatchError("the product criterion needs a hyperbolic model")
    if k < 7.0 * delta:
        raise ValueError("need k >= 7*delta, got k=%r delta=%r" % (k, delta))
    df = _exact_stable_length(f)
    dg = _exact_stable_length(g)
    gap = _distance(model, _apply(f, x), _apply(g, x))
    threshold = max(_displacement_at(f, x) + dg, _displacement_at(g, x) + df) + k
    if gap <= threshold:
        return None
    return df + dg + 2.0 * k - 14.0 * delta


def _apply(f, x):
    if isinstance(f, FreeWord):
        return f.mul(x)
    return f.apply(x)


@dataclass(frozen=True, slots=True)
class MinLengthReport:
    """Numeric check of the 16-delta bounds relating minimal displacement
    (infimum over basepoints) to the (joint) stable length."""

    sup_min_displacement: float
    stable_reference: float
    delta: float
    bound: float
    holds: bool
    minimizers: tuple = field(default=())

    def to_dict(self) -> dict:
        return {
            "sup_min_displacement": self.sup_min_displacement,
            "stable_reference": self.stable_reference,
            "delta": self.delta,
            "bound": self.bound,
            "holds": self.holds,
        }


def min_length_report(target, depth: int = 6, search=None, budget: int = DEFAULT_BUDGET) -> MinLengthReport:
    """Check sup over elements of the minimal displacement against the
    16-delta bound (half-plane model only; the plane there is convex, so
    for single isometries the two sides agree up to optimizer error)."""
    from .jsr import SearchConfig, min_joint_displacement

    search = search or SearchConfig()
    if isinstance(target, H2Isometry):
        elements = (target,)
        reference = target.stable_length()
    else:
        if target.model != "h2":
            raise ModelMismatchError("minimal-length bounds are checked in the half-plane model")
        elements = target.elements
        reference = jsl_bracket(target, n=depth, budget=budget).hi
    mins = []
    points = []
    for f in elements:
        pt, val = min_joint_displacement(IsometrySet("h2", (f,)), search)
        mins.append(val)
        points.append(pt)
    sup_min = max(mins)
    bound = reference + 16.0 * DELTA_H2
    return MinLengthReport(
        sup_min_displacement=sup_min,
        stable_reference=reference,
        delta=DELTA_H2,
        bound=bound,
        holds=sup_min <= bound + 1e-9,
        minimizers=tuple(points),
    )
