"""Concrete models of (delta-)hyperbolic spaces and their isometries.

Three models are implemented:

* the upper half-plane with the hyperbolic metric, acted on by 2x2 real
  matrices of determinant +-1 through Moebius maps (delta = log 2);
* the Cayley tree of the rank-2 free group, acted on by reduced words
  through left multiplication (delta = 0, all quantities exact integers);
* the Euclidean plane acted on by z -> u*z + a, which is *not* hyperbolic
  and serves as the counterexample model.

The module also provides a four-point-condition estimator that returns the
minimal delta under which a finite distance table is delta-hyperbolic.
"""

from __future__ import annotations

import cmath
import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .mat2 import Mat2

__all__ = [
    "DELTA_H2",
    "DELTA_FREE",
    "HPoint",
    "IsoClass",
    "H2Isometry",
    "FreeWord",
    "EuclidIsometry",
    "MetricSample",
    "h2_distance",
    "mobius_apply",
    "basepoint_conjugator",
    "h2_displacement",
    "h2_stable_length",
    "h2_classify",
    "free_distance",
    "fpc_delta",
]

# hyperbolicity constants of the finished models (four point condition)
DELTA_H2 = math.log(2.0)
DELTA_FREE = 0.0

# points closer to the real axis are rejected to keep acosh arguments stable
_MIN_Y = 1e-12


@dataclass(frozen=True, slots=True)
class HPoint:
    """Point x + iy of the upper half-plane, y > 0."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError("half-plane point must be finite")
        if self.y < _MIN_Y:
            raise ValueError("half-plane point must have y >= %g" % _MIN_Y)

    @staticmethod
    def base() -> "HPoint":
        return HPoint(0.0, 1.0)

    def as_complex(self) -> complex:
        return complex(self.x, self.y)


def h2_distance(z: HPoint, w: HPoint) -> float:
    """Hyperbolic distance, acosh(1 + |z-w|^2 / (2 Im z Im w))."""
    dx = z.x - w.x
    dy = z.y - w.y
    return math.acosh(1.0 + (dx * dx + dy * dy) / (2.0 * z.y * w.y))


class IsoClass(enum.Enum):
    """The three kinds of isometry of a hyperbolic space."""

    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"


def _mobius(m: Mat2, orientation: int, z: HPoint) -> HPoint:
    zz = z.as_complex()
    if orientation < 0:
        zz = zz.conjugate()
    den = m.c * zz + m.d
    w = (m.a * zz + m.b) / den
    # the imaginary part has the exact positive form y/|cz+d|^2; computing it
    # directly avoids cancellation for points far from the basepoint
    y = z.y / (den.real * den.real + den.imag * den.imag)
    return HPoint(w.real, y)


def mobius_apply(f: "H2Isometry | Mat2", z: HPoint) -> HPoint:
    """Apply a half-plane isometry; determinant -1 acts through conj(z)."""
    if isinstance(f, Mat2):
        f = H2Isometry.from_matrix(f)
    return _mobius(f.m, f.orientation, z)


def basepoint_conjugator(z: HPoint) -> Mat2:
    """A determinant-1 matrix S whose Moebius map sends z to i.

    Concretely S = [[1/sqrt(y), -x/sqrt(y)], [0, sqrt(y)]].
    """
    r = math.sqrt(z.y)
    return Mat2(1.0 / r, -z.x / r, 0.0, r)


def h2_displacement(a: Mat2, z: HPoint) -> float:
    """Distance from z to its image, 2 log ||S A S^-1||_2 / sqrt|det A|."""
    m = a.normalize_sl()
    s = basepoint_conjugator(z)
    conj = s @ m @ s.inverse()
    # conjugates of SL2 matrices have operator norm >= 1
    return 2.0 * math.log(max(conj.op_norm2(), 1.0))


def h2_stable_length(a: Mat2) -> float:
    """Limit displacement per application, 2 log rho(A) after normalization."""
    rho = a.normalize_sl().spectral_radius()
    return max(0.0, 2.0 * math.log(max(rho, 1.0)))


def h2_classify(a: Mat2, tol: float = 1e-9) -> IsoClass:
    """Elliptic / parabolic / hyperbolic trichotomy for a half-plane isometry.

    Hyperbolic means positive stable length, i.e. rho > 1.  Parabolic
    requires det = 1, |trace| = 2 and the matrix not being +-identity.
    """
    m = a.normalize_sl()
    if m.spectral_radius() > 1.0 + tol:
        return IsoClass.HYPERBOLIC
    if (
        m.det() > 0.0
        and abs(abs(m.trace()) - 2.0) <= tol
        and m.max_abs_diff(Mat2.identity()) > 1e-12
    ):
        return IsoClass.PARABOLIC
    return IsoClass.ELLIPTIC


@dataclass(frozen=True, slots=True)
class H2Isometry:
    """Half-plane isometry: canonical matrix plus determinant sign."""

    m: Mat2
    orientation: int

    def __post_init__(self):
        if abs(abs(self.m.det()) - 1.0) > 1e-12:
            raise ValueError("isometry matrix must have |det| = 1")

    @classmethod
    def from_matrix(cls, a: Mat2) -> "H2Isometry":
        m = a.normalize_sl()
        return cls(m, 1 if m.det() > 0.0 else -1)

    def apply(self, z: HPoint) -> HPoint:
        return _mobius(self.m, self.orientation, z)

    def compose(self, other: "H2Isometry") -> "H2Isometry":
        return H2Isometry.from_matrix(self.m @ other.m)

    def displacement(self, z: HPoint) -> float:
        return h2_displacement(self.m, z)

    def stable_length(self) -> float:
        return h2_stable_length(self.m)

    def classify(self) -> IsoClass:
        return h2_classify(self.m)

    def canonical_key(self) -> tuple:
        """Dedup key: entries rounded to ~1e-12 relative, plus det sign."""
        scale = max(abs(v) for v in self.m.entries())
        return (self.orientation,) + tuple(
            round(v / scale, 12) for v in self.m.entries()
        )


def _reduce_letters(letters) -> tuple[int, ...]:
    out: list[int] = []
    for s in letters:
        s = int(s)
        if s == 0:
            raise ValueError("letter 0 is not a generator")
        if out and out[-1] == -s:
            out.pop()
        else:
            out.append(s)
    return tuple(out)


@dataclass(frozen=True, slots=True)
class FreeWord:
    """Freely reduced word; letter k > 0 is the k-th generator, -k its inverse."""

    letters: tuple[int, ...] = ()

    def __post_init__(self):
        for i, s in enumerate(self.letters):
            if s == 0:
                raise ValueError("letter 0 is not a generator")
            if i and self.letters[i - 1] == -s:
                raise ValueError("word is not reduced at position %d" % i)

    @staticmethod
    def parse(text: str) -> "FreeWord":
        """Parse 'aAbB...' (uppercase = inverse), reducing as needed."""
        letters = []
        for ch in text:
            if ch.isspace():
                continue
            if ch.islower():
                letters.append(ord(ch) - ord("a") + 1)
            elif ch.isupper():
                letters.append(-(ord(ch) - ord("A") + 1))
            else:
                raise ValueError("invalid word character %r" % ch)
        return FreeWord(_reduce_letters(letters))

    def __str__(self) -> str:
        chars = []
        for s in self.letters:
            if abs(s) > 26:
                raise ValueError("letter %d has no single-character name" % s)
            base = ord("a") if s > 0 else ord("A")
            chars.append(chr(base + abs(s) - 1))
        return "".join(chars)

    def __len__(self) -> int:
        return len(self.letters)

    def mul(self, other: "FreeWord") -> "FreeWord":
        return FreeWord(_reduce_letters(self.letters + other.letters))

    def inverse(self) -> "FreeWord":
        return FreeWord(tuple(-s for s in reversed(self.letters)))

    def power(self, n: int) -> "FreeWord":
        if n < 0:
            return self.inverse().power(-n)
        acc = FreeWord()
        for _ in range(n):
            acc = acc.mul(self)
        return acc

    def cyclic_reduced(self) -> "FreeWord":
        w = self.letters
        lo, hi = 0, len(w)
        while hi - lo >= 2 and w[lo] == -w[hi - 1]:
            lo += 1
            hi -= 1
        return FreeWord(w[lo:hi])

    def displacement(self, x: "FreeWord | None" = None) -> int:
        """Tree distance |w x - x|; equals the word length at the identity."""
        if x is None or not x.letters:
            return len(self.letters)
        return len(x.inverse().mul(self).mul(x))

    def stable_length(self) -> int:
        """Limit displacement per application: cyclically reduced length."""
        return len(self.cyclic_reduced())


def free_distance(u: FreeWord, v: FreeWord) -> int:
    """Distance between the tree vertices u and v, |u^-1 v|."""
    return len(u.inverse().mul(v))


@dataclass(frozen=True, slots=True)
class EuclidIsometry:
    """Plane isometry z -> u z + a with |u| = 1."""

    u: complex
    a: complex

    def __post_init__(self):
        if abs(abs(self.u) - 1.0) > 1e-12:
            raise ValueError("rotation part must lie on the unit circle")

    def apply(self, z: complex) -> complex:
        return self.u * z + self.a

    def compose(self, other: "EuclidIsometry") -> "EuclidIsometry":
        return EuclidIsometry(self.u * other.u, self.u * other.a + self.a)

    def displacement(self, z: complex = 0j) -> float:
        return abs(self.apply(z) - z)

    def is_translation(self, tol: float = 1e-12) -> bool:
        return abs(self.u - 1.0) <= tol

    def stable_length(self) -> float:
        """|a| for a translation, else 0 (rotations have bounded orbits)."""
        return abs(self.a) if self.is_translation() else 0.0

    def canonical_key(self) -> tuple:
        return (
            round(self.u.real, 12),
            round(self.u.imag, 12),
            round(self.a.real, 12),
            round(self.a.imag, 12),
        )


@dataclass(frozen=True, eq=False)
class MetricSample:
    """Finite metric sample: point ids plus a validated distance table."""

    points: tuple
    distances: np.ndarray = field(repr=False)

    def __post_init__(self):
        d = np.ascontiguousarray(self.distances, dtype=np.float64)
        n = len(self.points)
        if d.shape != (n, n):
            raise ValueError("distance table shape %s does not match %d points" % (d.shape, n))
        if not np.all(np.isfinite(d)):
            raise ValueError("distances must be finite")
        if np.any(d < 0.0):
            raise ValueError("distances must be nonnegative")
        if np.any(np.abs(np.diag(d)) > 1e-9):
            raise ValueError("diagonal must be zero")
        if np.any(np.abs(d - d.T) > 1e-9):
            raise ValueError("distance table must be symmetric")
        for k in range(n):
            if np.any(d > d[:, [k]] + d[[k], :] + 1e-9):
                raise ValueError("triangle inequality fails through point %r" % (self.points[k],))
        d.setflags(write=False)
        object.__setattr__(self, "distances", d)

    def __len__(self) -> int:
        return len(self.points)

    @classmethod
    def from_points(cls, ids, dist) -> "MetricSample":
        """Build a sample from points and a pairwise distance function."""
        ids = tuple(ids)
        n = len(ids)
        d = np.zeros((n, n))
        for i in range(n):
            for j in range(i + 1, n):
                d[i, j] = d[j, i] = dist(ids[i], ids[j])
        return cls(ids, d)

    def subsample(self, indices) -> "MetricSample":
        idx = list(indices)
        pts = tuple(self.points[i] for i in idx)
        return MetricSample(pts, self.distances[np.ix_(idx, idx)])


def fpc_delta(sample: MetricSample) -> float:
    """Minimal delta for which the sample satisfies the four point condition.

    Scans all unordered quadruples; for each, the defect is half the gap
    between the largest and the middle pair-pairing sum.  O(n^4).
    """
    if len(sample) < 4:
        warnings.warn("four point condition needs at least 4 points; returning 0")
        return 0.0
    return float(_backend.fpc_max_defect(sample.distances))


def h2_sample(points) -> MetricSample:
    """MetricSample of half-plane points under the hyperbolic metric."""
    return MetricSample.from_points(tuple(points), h2_distance)
