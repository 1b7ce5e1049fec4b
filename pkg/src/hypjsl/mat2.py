"""Exact-as-possible 2x2 real linear algebra.

Everything downstream (isometries of the upper half-plane, joint spectral
radius bounds) reduces to a handful of closed-form quantities of a 2x2
matrix: the Euclidean operator norm (largest singular value), the spectral
radius, and determinant-normalized canonical forms.  Both the norm and the
radius admit exact quadratic formulas, so no iterative linear algebra is
used here.

Long products are kept in :class:`ScaledProduct` form, a unit-norm matrix
together with the natural log of the scalar factored out, so that norms of
products of length 10^4 never overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "Mat2",
    "ScaledProduct",
    "gelfand_estimate",
]


@dataclass(frozen=True, slots=True)
class Mat2:
    """Row-major 2x2 real matrix with finite entries."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        for v in (self.a, self.b, self.c, self.d):
            if not math.isfinite(v):
                raise ValueError("matrix entries must be finite, got %r" % (v,))

    @staticmethod
    def identity() -> "Mat2":
        return Mat2(1.0, 0.0, 0.0, 1.0)

    def __matmul__(self, other: "Mat2") -> "Mat2":
        return Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __neg__(self) -> "Mat2":
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def scale(self, s: float) -> "Mat2":
        return Mat2(self.a * s, self.b * s, self.c * s, self.d * s)

    def transpose(self) -> "Mat2":
        return Mat2(self.a, self.c, self.b, self.d)

    def trace(self) -> float:
        return self.a + self.d

    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    def inverse(self) -> "Mat2":
        dt = self.det()
        if dt == 0.0:
            raise ZeroDivisionError("singular matrix has no inverse")
        return Mat2(self.d / dt, -self.b / dt, -self.c / dt, self.a / dt)

    def op_norm2(self) -> float:
        """Largest singular value, from the eigenvalues of A^T A.

        tr(A^T A) = s1^2 + s2^2 and |det A| = s1*s2, so the discriminant
        (s1^2 - s2^2)^2 is computed in the factored form below, which stays
        nonnegative up to rounding; tiny negatives are clamped.
        """
        t = self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d
        dt = abs(self.det())
        disc = (t - 2.0 * dt) * (t + 2.0 * dt)
        if disc < 0.0:
            disc = 0.0
        return math.sqrt(0.5 * (t + math.sqrt(disc)))

    def spectral_radius(self) -> float:
        """Max modulus of the roots of x^2 - tr(A) x + det(A)."""
        tr = self.trace()
        dt = self.det()
        disc = tr * tr - 4.0 * dt
        if disc >= 0.0:
            return 0.5 * (abs(tr) + math.sqrt(disc))
        # complex conjugate pair, both of modulus sqrt(det)
        return math.sqrt(dt)

    def normalize_sl(self) -> "Mat2":
        """Scale into SL2^+- (|det| = 1) and canonicalize the global sign.

        The matrices A and -A induce the same Moebius map, so the canonical
        representative has its first nonzero entry (in row-major order)
        positive.  The sign of the determinant is preserved.
        """
        dt = self.det()
        if dt == 0.0 or not math.isfinite(dt):
            raise ValueError("cannot normalize a singular matrix")
        s = 1.0 / math.sqrt(abs(dt))
        m = self.scale(s)
        for v in (m.a, m.b, m.c, m.d):
            if v != 0.0:
                return -m if v < 0.0 else m
        raise ValueError("zero matrix cannot be normalized")

    def max_abs_diff(self, other: "Mat2") -> float:
        return max(
            abs(self.a - other.a),
            abs(self.b - other.b),
            abs(self.c - other.c),
            abs(self.d - other.d),
        )

    def entries(self) -> tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.d)


# operator-norm band maintained by ScaledProduct; wide enough that
# renormalization is rare, tight enough to never overflow at depth 10^4
_BAND_LO = 0.5
_BAND_HI = 2.0


@dataclass(frozen=True, slots=True)
class ScaledProduct:
    """A long matrix product stored as exp(log_scale) * m with ||m|| in [0.5, 2].

    ``word`` records the generator indices absorbed so far.
    """

    m: Mat2
    log_scale: float
    word: tuple[int, ...] = ()

    @staticmethod
    def start() -> "ScaledProduct":
        return ScaledProduct(Mat2.identity(), 0.0, ())

    def extend(self, a: Mat2, index: int | None = None) -> "ScaledProduct":
        """Absorb a factor on the right, renormalizing into the norm band."""
        m = self.m @ a
        ls = self.log_scale
        norm = m.op_norm2()
        if norm == 0.0:
            raise ValueError("product collapsed to the zero matrix")
        if not (_BAND_LO <= norm <= _BAND_HI):
            m = m.scale(1.0 / norm)
            ls += math.log(norm)
        word = self.word if index is None else self.word + (index,)
        return ScaledProduct(m, ls, word)

    @property
    def log_norm(self) -> float:
        """log of the Euclidean operator norm of the represented matrix."""
        return self.log_scale + math.log(self.m.op_norm2())

    @property
    def log_spectral_radius(self) -> float:
        """log of the spectral radius; -inf if the product is nilpotent."""
        rho = self.m.spectral_radius()
        if rho == 0.0:
            return -math.inf
        return self.log_scale + math.log(rho)

    def represented(self) -> Mat2:
        """The actual matrix; may overflow for very long products."""
        return self.m.scale(math.exp(self.log_scale))


def gelfand_estimate(a: Mat2, n: int) -> float:
    """||A^n||_2^(1/n), an upper proxy for the spectral radius.

    Computed through :class:`ScaledProduct` so that large n cannot
    overflow.  Always >= rho(A) up to rounding.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    p = ScaledProduct.start()
    for _ in range(n):
        p = p.extend(a)
    return math.exp(p.log_norm / n)
