"""Joint spectral radius bounds for 2x2 matrix sets and the half-plane bridge.

The joint spectral radius of a finite set M is squeezed between

* max over products P of length m of rho(P)^(1/m)  (lower, Berger-Wang), and
* min over m of max ||P||_2^(1/m)                  (upper, subadditivity).

For sets of determinant +-1 matrices the quantity 2 log R(M) equals the
joint stable length of the induced half-plane isometries, which
``bridge_check`` verifies numerically.  ``finiteness_scan`` explores the
one-parameter pair family whose extremal cyclic word class switches as the
parameter grows, the numerically observable trace of the failure of the
finiteness property.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from . import _backend
from .exceptions import BudgetExceededError
from .mat2 import Mat2, ScaledProduct
from .stable import (
    DEFAULT_BUDGET,
    HI_SUBADDITIVE,
    LO_BERGER_WANG,
    Bracket,
    IsometrySet,
    jsl_bracket,
)
from .models import HPoint, h2_displacement
from .util import worker_count

__all__ = [
    "MatrixSet",
    "CyclicClass",
    "ScanRow",
    "SearchConfig",
    "BridgeReport",
    "jsr_bounds",
    "bridge_check",
    "family_at",
    "finiteness_scan",
    "min_joint_displacement",
]


@dataclass(frozen=True, slots=True)
class MatrixSet:
    """Finite nonempty set of 2x2 matrices, canonicalized and labeled."""

    matrices: tuple[Mat2, ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        if not self.matrices:
            raise ValueError("matrix set must be nonempty")
        if len(self.labels) != len(self.matrices):
            raise ValueError("one label per matrix required")

    @classmethod
    def of(cls, mats, labels=None) -> "MatrixSet":
        out = []
        for m in mats:
            m = m if isinstance(m, Mat2) else Mat2(*m)
            out.append(m.normalize_sl() if m.det() != 0.0 else m)
        dedup = {}
        for m in out:
            dedup.setdefault(tuple(round(v, 12) for v in m.entries()), m)
        matrices = tuple(dedup.values())
        if labels is None:
            labels = tuple(str(i) for i in range(len(matrices)))
        return cls(matrices, tuple(labels))

    def __len__(self) -> int:
        return len(self.matrices)

    def all_invertible(self, tol: float = 0.0) -> bool:
        return all(abs(m.det()) > tol for m in self.matrices)


def _gen_array(ms: MatrixSet) -> np.ndarray:
    return np.array([m.entries() for m in ms.matrices], dtype=np.float64)


def jsr_bounds(ms: MatrixSet, depth: int = 8, budget: int = DEFAULT_BUDGET) -> Bracket:
    """Bracket for the joint spectral radius, in multiplicative scale."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if len(ms) ** depth > budget:
        raise BudgetExceededError(
            "%d^%d products exceed the budget of %d" % (len(ms), depth, budget)
        )
    max_log_norm, max_log_rho = _backend.product_scan(_gen_array(ms), depth)
    hi = math.inf
    lo = 0.0
    for m in range(1, depth + 1):
        hi = min(hi, math.exp(max_log_norm[m - 1] / m))
        if max_log_rho[m - 1] > -math.inf:
            lo = max(lo, math.exp(max_log_rho[m - 1] / m))
    return Bracket(lo, hi, depth, 0.0, LO_BERGER_WANG, HI_SUBADDITIVE)


@dataclass(frozen=True, slots=True)
class BridgeReport:
    """Joint stable length bracket vs. 2 log of the spectral-radius bracket."""

    jsl: Bracket
    jsr: Bracket
    log_jsr_lo: float
    log_jsr_hi: float
    overlap: bool

    def to_dict(self) -> dict:
        return {
            "jsl": self.jsl.to_dict(),
            "jsr": self.jsr.to_dict(),
            "log_jsr_lo": self.log_jsr_lo,
            "log_jsr_hi": self.log_jsr_hi,
            "overlap": self.overlap,
        }


def bridge_check(ms: MatrixSet, depth: int = 6, budget: int = DEFAULT_BUDGET) -> BridgeReport:
    """Verify that the two routes to the joint stable length agree.

    Both the isometry-side bracket and [2 log lo, 2 log hi] from the
    matrix side contain the common true value, so they must overlap.
    """
    if not ms.all_invertible():
        raise ValueError("the half-plane bridge needs invertible matrices")
    isos = IsometrySet.from_matrices(ms.matrices)
    jsl = jsl_bracket(isos, n=depth, budget=budget)
    jsr = jsr_bounds(ms, depth=depth, budget=budget)
    lo = 2.0 * math.log(jsr.lo) if jsr.lo > 0.0 else -math.inf
    hi = 2.0 * math.log(jsr.hi)
    overlap = max(jsl.lo, lo) <= min(jsl.hi, hi) + 1e-9
    return BridgeReport(jsl, jsr, lo, hi, overlap)


def family_at(t: float) -> MatrixSet:
    """The scan family: the fixed matrix [[2,1],[3,2]] paired with
    [[2/t, 3t], [1/t, 2t]]; both have determinant 1 for every t > 0."""
    if not (t > 0.0) or not math.isfinite(t):
        raise ValueError("family parameter must be a positive real, got %r" % (t,))
    a0 = Mat2(2.0, 1.0, 3.0, 2.0)
    a1 = Mat2(2.0 / t, 3.0 * t, 1.0 / t, 2.0 * t)
    return MatrixSet((a0, a1), ("0", "1"))


@dataclass(frozen=True, slots=True)
class CyclicClass:
    """Word class modulo rotation; the representative is the lexicographically
    smallest rotation and is never a proper power."""

    word: tuple[int, ...]

    def __post_init__(self):
        if not self.word:
            raise ValueError("empty word has no cyclic class")
        if self.word != _min_rotation(self.word):
            raise ValueError("representative must be the minimal rotation")
        if _is_proper_power(self.word):
            raise ValueError("representative must not be a proper power")

    @property
    def length(self) -> int:
        return len(self.word)

    def __str__(self) -> str:
        return "".join(str(i) for i in self.word)


@dataclass(frozen=True, slots=True)
class ScanRow:
    """One scan result: the best cyclic class at this parameter value."""

    t: float
    best_class: CyclicClass
    best_value: float
    jsr_upper: float

    def __post_init__(self):
        if self.best_value > self.jsr_upper + 1e-9:
            raise ValueError("class value cannot exceed the norm upper bound")

    @property
    def gap(self) -> float:
        return self.jsr_upper - self.best_value

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "best_class": str(self.best_class),
            "best_value": self.best_value,
            "jsr_upper": self.jsr_upper,
            "gap": self.gap,
        }


def _min_rotation(word: tuple[int, ...]) -> tuple[int, ...]:
    return min(word[i:] + word[:i] for i in range(len(word)))


def _is_proper_power(word: tuple[int, ...]) -> bool:
    n = len(word)
    for d in range(1, n):
        if n % d == 0 and word == word[:d] * (n // d):
            return True
    return False


def _normalized_log_rho(ms: MatrixSet, word: tuple[int, ...]) -> float:
    p = ScaledProduct.start()
    for i in word:
        p = p.extend(ms.matrices[i], i)
    return p.log_spectral_radius / len(word)


def _scan_one(t: float, depth: int) -> ScanRow:
    ms = family_at(t)
    best_word = None
    best_log = -math.inf
    for m in range(1, depth + 1):
        for word in _cyclic_representatives(len(ms), m):
            value = _normalized_log_rho(ms, word)
            if value > best_log:
                best_log = value
                best_word = word
    max_log_norm, _ = _backend.product_scan(_gen_array(ms), depth)
    upper_log = min(max_log_norm[m - 1] / m for m in range(1, depth + 1))
    return ScanRow(
        t=t,
        best_class=CyclicClass(best_word),
        best_value=math.exp(best_log),
        jsr_upper=math.exp(upper_log),
    )


def _cyclic_representatives(k: int, length: int):
    """Lexicographic minimal rotations of the given length that are not
    proper powers; rho^(1/length) is constant on each class and on powers,
    so skipping the rest loses nothing."""
    import itertools

    for word in itertools.product(range(k), repeat=length):
        if word == _min_rotation(word) and not _is_proper_power(word):
            yield word


def finiteness_scan(t_grid, depth: int = 10, budget: int = DEFAULT_BUDGET) -> list[ScanRow]:
    """Best cyclic class per parameter value, with the norm upper bound.

    A persistent positive gap between the upper bound and the best class
    value at the maximal depth is consistent with failure of the
    finiteness property, but the scan never claims a proof.
    """
    ts = [float(t) for t in t_grid]
    if not ts:
        raise ValueError("parameter grid must be nonempty")
    if depth < 2:
        raise ValueError("scan depth must be >= 2")
    if 2 ** depth > budget:
        raise BudgetExceededError("2^%d products exceed the budget of %d" % (depth, budget))
    workers = min(worker_count(), len(ts))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda t: _scan_one(t, depth), ts))
    return [_scan_one(t, depth) for t in ts]


@dataclass(frozen=True, slots=True)
class SearchConfig:
    """Settings for the displacement minimizer: a (x, log y) box scanned on
    a coarse grid, then refined with derivative-free simplex descent."""

    x_min: float = -10.0
    x_max: float = 10.0
    log_y_min: float = -5.0
    log_y_max: float = 5.0
    grid: int = 64
    max_iter: int = 200
    tol: float = 1e-6


def min_joint_displacement(s: IsometrySet, search: SearchConfig | None = None):
    """Approximate minimizer of z -> max displacement over the set.

    Returns (point, value); the value is an upper bound on the true
    infimum.  The joint displacement map is proper for sets of hyperbolic
    isometries with distinct axes, so the default box is adequate for
    normalized inputs.
    """
    if s.model != "h2":
        raise ValueError("displacement minimization is a half-plane operation")
    cfg = search or SearchConfig()

    mats = [f.m for f in s.elements]

    def objective(p) -> float:
        try:
            z = HPoint(float(p[0]), math.exp(float(p[1])))
        except (OverflowError, ValueError):
            return math.inf
        return max(h2_displacement(m, z) for m in mats)

    xs = np.linspace(cfg.x_min, cfg.x_max, cfg.grid)
    lys = np.linspace(cfg.log_y_min, cfg.log_y_max, cfg.grid)
    best_p = None
    best_v = math.inf
    for x in xs:
        for ly in lys:
            v = objective((x, ly))
            if v < best_v:
                best_v = v
                best_p = (float(x), float(ly))

    res = minimize(
        objective,
        np.array(best_p),
        method="Nelder-Mead",
        options={
            "maxiter": cfg.max_iter,
            "fatol": cfg.tol,
            "xatol": cfg.tol,
        },
    )
    if res.fun <= best_v:
        best_p = (float(res.x[0]), float(res.x[1]))
        best_v = float(res.fun)
    return HPoint(best_p[0], math.exp(best_p[1])), best_v
