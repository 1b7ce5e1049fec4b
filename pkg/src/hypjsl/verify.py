"""Seeded property-verification suite for the displacement inequalities.

Every inequality is checked as a *slack*: right-hand side minus left-hand
side, which must stay >= -1e-9 on randomized inputs.  Slacks are reported
(minimum and the input attaining it), so suite runs tighten regressions
rather than merely pass.  The half-plane checks run at delta = log 2, the
free-group checks at delta = 0 in exact integer arithmetic.  The plane
model is exempt from every hyperbolic check and instead supplies the
designed counterexamples: the failure of the d-step inequality in
Euclidean space and the stable-length discontinuity.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field

from .exceptions import ModelMismatchError
from .mat2 import Mat2
from .models import (
    DELTA_H2,
    EuclidIsometry,
    FreeWord,
    H2Isometry,
    HPoint,
    h2_stable_length,
)
from .stable import (
    IsometrySet,
    _apply,
    _displacement_at,
    _distance,
    _exact_stable_length,
    _compose,
    _model_of,
    default_basepoint,
    displacement,
    model_delta,
    set_power,
)

__all__ = [
    "square_inequality_slack",
    "pair_inequality_slack",
    "set_square_slack",
    "near_commutation_slack",
    "MatrixInequalityReport",
    "matrix_inequality_report",
    "EuclidWitness",
    "euclidean_counterexample",
    "continuity_probe",
    "euclid_continuity_jump",
    "random_sl2",
    "random_hpoint",
    "random_free_word",
    "CheckResult",
    "SuiteReport",
    "run_suite",
    "SUITE_CHECKS",
]


def _as_iso(f):
    if isinstance(f, Mat2):
        return H2Isometry.from_matrix(f)
    if isinstance(f, EuclidIsometry):
        raise ModelMismatchError("the plane model is exempt from hyperbolic checks")
    return f


def _delta_of(f, delta):
    if delta is not None:
        return delta
    d = model_delta(_model_of(f))
    if d is None:
        raise ModelMismatchError("the plane model is exempt from hyperbolic checks")
    return d


def square_inequality_slack(f, x=None, delta: float | None = None) -> float:
    """Slack of |f^2 x - x| <= |f x - x| + slen(f) + 2 delta."""
    f = _as_iso(f)
    delta = _delta_of(f, delta)
    x = default_basepoint(_model_of(f)) if x is None else x
    f2 = _compose(f, f)
    return (
        _displacement_at(f, x)
        + _exact_stable_length(f)
        + 2.0 * delta
        - _displacement_at(f2, x)
    )


def pair_inequality_slack(f, g, x=None, delta: float | None = None) -> float:
    """Slack of the two-isometry inequality: |fg x - x| is at most

    max(|fx-x| + slen(g), |gx-x| + slen(f),
        (|fx-x| + |gx-x| + slen(fg)) / 2) + 6 delta.
    """
    f = _as_iso(f)
    g = _as_iso(g)
    delta = _delta_of(f, delta)
    x = default_basepoint(_model_of(f)) if x is None else x
    fg = _compose(f, g)
    df = _displacement_at(f, x)
    dg = _displacement_at(g, x)
    rhs = max(
        df + _exact_stable_length(g),
        dg + _exact_stable_length(f),
        0.5 * (df + dg + _exact_stable_length(fg)),
    )
    return rhs + 6.0 * delta - _displacement_at(fg, x)


def set_square_slack(s: IsometrySet, x=None, delta: float | None = None) -> float:
    """Slack of |S^2 x| <= |S x| + max slen over S^2 / 2 + 6 delta.

    This is the sharper intermediate form; the weaker right-hand side with
    the joint stable length follows from it.
    """
    if delta is None:
        delta = model_delta(s.model)
        if delta is None:
            raise ModelMismatchError("the plane model is exempt from hyperbolic checks")
    x = default_basepoint(s.model) if x is None else x
    s2 = set_power(s, 2)
    dinf2 = max(_exact_stable_length(f) for f in s2.elements)
    return displacement(s, x) + 0.5 * dinf2 + 6.0 * delta - displacement(s2, x)


def near_commutation_slack(f, g, x=None, k: float | None = None, delta: float | None = None):
    """When the images of x under f and g are separated by more than
    max(|fx-x| + slen(g), |gx-x| + slen(f)) + max(k, 4 delta), the two
    products displace x almost equally: ||fgx-x| - |gfx-x|| <= 4 delta.
    Returns that slack, or None when the separation hypothesis fails.
    """
    f = _as_iso(f)
    g = _as_iso(g)
    delta = _delta_of(f, delta)
    model = _model_of(f)
    x = default_basepoint(model) if x is None else x
    threshold = 4.0 * delta if k is None else max(k, 4.0 * delta)
    gap = _distance(model, _apply(f, x), _apply(g, x))
    df = _displacement_at(f, x)
    dg = _displacement_at(g, x)
    if gap <= max(df + _exact_stable_length(g), dg + _exact_stable_length(f)) + threshold:
        return None
    fg = _displacement_at(_compose(f, g), x)
    gf = _displacement_at(_compose(g, f), x)
    return 4.0 * delta - abs(fg - gf)


@dataclass(frozen=True, slots=True)
class MatrixInequalityReport:
    """Slacks of the three 2x2 norm/radius inequalities.

    conjugate_square: ||S A^2 S^-1|| <= 2 rho(A) ||S A S^-1||
    pair:             ||AB|| <= 8 max(||A|| rho(B), ||B|| rho(A),
                                      sqrt(||A|| ||B|| rho(AB)))
    power:            ||A^2|| <= 3 rho(A) ||A||

    All three are homogeneous, so they hold for arbitrary real matrices.
    """

    conjugate_square: float
    pair: float
    power: float

    @property
    def min_slack(self) -> float:
        return min(self.conjugate_square, self.pair, self.power)


def matrix_inequality_report(a: Mat2, b: Mat2, s: Mat2 | None = None) -> MatrixInequalityReport:
    if s is None:
        s = Mat2.identity()
    s_inv = s.inverse()
    a2 = a @ a
    conj_sq = 2.0 * a.spectral_radius() * (s @ a @ s_inv).op_norm2() - (
        s @ a2 @ s_inv
    ).op_norm2()
    ab = a @ b
    na = a.op_norm2()
    nb = b.op_norm2()
    pair = (
        8.0
        * max(
            na * b.spectral_radius(),
            nb * a.spectral_radius(),
            math.sqrt(na * nb * ab.spectral_radius()),
        )
        - ab.op_norm2()
    )
    power = 3.0 * a.spectral_radius() * na - a2.op_norm2()
    return MatrixInequalityReport(conj_sq, pair, power)


@dataclass(frozen=True, slots=True)
class EuclidWitness:
    """A rotation arbitrarily close to a translation violating the d-step
    displacement inequality |S^d x| <= (d-1)|S x| + joint stable length + c."""

    u: complex
    a: complex
    margin: float
    halvings: int


def euclidean_counterexample(d: int = 2, c: float = 0.5) -> EuclidWitness:
    """Find a witness that the plane satisfies no d-step inequality.

    For f(z) = u z + a with u != 1 the joint stable length is 0, while
    |f^d(0)| -> d |a| as u -> 1; any |a| > c therefore yields a violation
    close to the limit gap |a| - c.  The rotation angle is halved until
    the violation margin reaches 98% of that gap.
    """
    if d < 2:
        raise ValueError("need d >= 2")
    if not (c > 0.0):
        raise ValueError("need c > 0")
    a = max(1.0, 2.0 * c)
    target = 0.98 * (a - c)
    m = 1
    for halvings in range(1, 61):
        m *= 2
        u = cmath.exp(1j * math.pi / m)
        orbit = a * abs(sum(u ** k for k in range(d)))
        margin = orbit - ((d - 1) * a + c)
        if margin >= target:
            return EuclidWitness(u=u, a=complex(a), margin=margin, halvings=halvings)
    raise AssertionError("no witness found within 60 halvings")


# perturbation directions: signed elementary matrices
_PERTURBATIONS = [
    Mat2(1.0, 0.0, 0.0, 0.0),
    Mat2(0.0, 1.0, 0.0, 0.0),
    Mat2(0.0, 0.0, 1.0, 0.0),
    Mat2(0.0, 0.0, 0.0, 1.0),
    Mat2(-1.0, 0.0, 0.0, 0.0),
    Mat2(0.0, -1.0, 0.0, 0.0),
    Mat2(0.0, 0.0, -1.0, 0.0),
    Mat2(0.0, 0.0, 0.0, -1.0),
]


def continuity_probe(a: Mat2, eps: float) -> float:
    """Largest change of the stable length under entrywise perturbations of
    size eps; small for isometries bounded away from the parabolic locus."""
    if not (eps > 0.0):
        raise ValueError("eps must be positive")
    base = h2_stable_length(a)
    dev = 0.0
    for e in _PERTURBATIONS:
        p = Mat2(
            a.a + eps * e.a,
            a.b + eps * e.b,
            a.c + eps * e.c,
            a.d + eps * e.d,
        )
        dev = max(dev, abs(h2_stable_length(p) - base))
    return dev


def euclid_continuity_jump(eps: float = 1e-6) -> float:
    """Contrast demo in the plane: the rotation z -> e^(i eps) z + 1 has
    stable length 0, the translation z -> z + 1 has stable length 1, so
    the stable length jumps no matter how small eps is."""
    rot = EuclidIsometry(cmath.exp(1j * eps), 1.0 + 0j)
    trans = EuclidIsometry(1.0 + 0j, 1.0 + 0j)
    return abs(trans.stable_length() - rot.stable_length())


# random input laws: entries i.i.d. uniform on [-3, 3], rejected while
# |det| < 1e-3, then determinant-normalized -- well-conditioned samples
# covering both orientation classes.


def random_sl2(rng: random.Random) -> Mat2:
    while True:
        m = Mat2(
            rng.uniform(-3.0, 3.0),
            rng.uniform(-3.0, 3.0),
            rng.uniform(-3.0, 3.0),
            rng.uniform(-3.0, 3.0),
        )
        if abs(m.det()) >= 1e-3:
            return m.normalize_sl()


def random_mat2(rng: random.Random) -> Mat2:
    return Mat2(
        rng.uniform(-3.0, 3.0),
        rng.uniform(-3.0, 3.0),
        rng.uniform(-3.0, 3.0),
        rng.uniform(-3.0, 3.0),
    )


def random_hpoint(rng: random.Random) -> HPoint:
    return HPoint(rng.uniform(-5.0, 5.0), math.exp(rng.uniform(-3.0, 3.0)))


def random_free_word(rng: random.Random, max_len: int = 8) -> FreeWord:
    n = rng.randint(0, max_len)
    return _from_letters(rng.choice((1, -1, 2, -2)) for _ in range(n))


def _from_letters(letters) -> FreeWord:
    acc: list[int] = []
    for s in letters:
        if acc and acc[-1] == -s:
            acc.pop()
        else:
            acc.append(s)
    return FreeWord(tuple(acc))


def random_separated_pair(rng: random.Random):
    """A pair built to satisfy the separation hypothesis often: a vertical
    translation and a conjugate of one by a large horizontal shift."""
    lam = math.exp(rng.uniform(0.5, 2.0))
    f = Mat2(lam, 0.0, 0.0, 1.0 / lam)
    shift = rng.uniform(20.0, 100.0)
    t = Mat2(1.0, shift, 0.0, 1.0)
    mu = math.exp(rng.uniform(0.5, 2.0))
    g = t @ Mat2(mu, 0.0, 0.0, 1.0 / mu) @ t.inverse()
    return H2Isometry.from_matrix(f), H2Isometry.from_matrix(g.normalize_sl())


def trial_rng(seed: int, name: str, index: int) -> random.Random:
    return random.Random("%d:%s:%d" % (seed, name, index))


@dataclass(frozen=True, slots=True)
class CheckResult:
    name: str
    trials: int
    min_slack: float
    argmin_input: dict
    passed: bool
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "trials": self.trials,
            "min_slack": self.min_slack,
            "argmin_input": self.argmin_input,
            "pass": self.passed,
            **({"extra": self.extra} if self.extra else {}),
        }


@dataclass(frozen=True, slots=True)
class SuiteReport:
    seed: int
    trials: int
    results: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "trials": self.trials,
            "pass": self.passed,
            "checks": [r.to_dict() for r in self.results],
        }


def _mat_json(m: Mat2):
    return [[m.a, m.b], [m.c, m.d]]


def _trial_square_h2(rng):
    a = random_sl2(rng)
    z = random_hpoint(rng)
    slack = square_inequality_slack(a, z)
    return slack, {"matrix": _mat_json(a), "z": {"x": z.x, "y": z.y}}


def _trial_square_free(rng):
    w = random_free_word(rng, 8)
    x = random_free_word(rng, 3)
    slack = square_inequality_slack(w, x)
    return slack, {"word": str(w), "basepoint": str(x)}


def _trial_pair_h2(rng):
    a = random_sl2(rng)
    b = random_sl2(rng)
    z = random_hpoint(rng)
    slack = pair_inequality_slack(a, b, z)
    return slack, {"A": _mat_json(a), "B": _mat_json(b), "z": {"x": z.x, "y": z.y}}


def _trial_pair_free(rng):
    v = random_free_word(rng, 8)
    w = random_free_word(rng, 8)
    x = random_free_word(rng, 3)
    slack = pair_inequality_slack(v, w, x)
    return slack, {"v": str(v), "w": str(w), "basepoint": str(x)}


def _trial_set_square_h2(rng):
    k = rng.randint(1, 3)
    mats = [random_sl2(rng) for _ in range(k)]
    s = IsometrySet.from_matrices(mats)
    z = random_hpoint(rng)
    slack = set_square_slack(s, z)
    return slack, {"matrices": [_mat_json(m) for m in mats], "z": {"x": z.x, "y": z.y}}


def _trial_set_square_free(rng):
    k = rng.randint(1, 3)
    words = [random_free_word(rng, 5) for _ in range(k)]
    s = IsometrySet.from_words(words)
    slack = set_square_slack(s)
    return slack, {"words": [str(w) for w in words]}


def _trial_near_commutation(rng):
    if rng.random() < 0.5:
        f, g = random_separated_pair(rng)
    else:
        f = H2Isometry.from_matrix(random_sl2(rng))
        g = H2Isometry.from_matrix(random_sl2(rng))
    z = random_hpoint(rng)
    slack = near_commutation_slack(f, g, z)
    info = {"A": _mat_json(f.m), "B": _mat_json(g.m), "z": {"x": z.x, "y": z.y}}
    return slack, info


def _trial_matrix_inequalities(rng):
    a = random_mat2(rng)
    b = random_mat2(rng)
    s = random_sl2(rng)
    report = matrix_inequality_report(a, b, s)
    return report.min_slack, {"A": _mat_json(a), "B": _mat_json(b), "S": _mat_json(s)}


SUITE_CHECKS = {
    "square-h2": _trial_square_h2,
    "square-free": _trial_square_free,
    "pair-h2": _trial_pair_h2,
    "pair-free": _trial_pair_free,
    "set-square-h2": _trial_set_square_h2,
    "set-square-free": _trial_set_square_free,
    "near-commutation-h2": _trial_near_commutation,
    "matrix-inequalities": _trial_matrix_inequalities,
}


def run_check(name: str, seed: int, trials: int) -> CheckResult:
    trial = SUITE_CHECKS[name]
    min_slack = math.inf
    argmin: dict = {}
    hits = 0
    for i in range(trials):
        slack, info = trial(trial_rng(seed, name, i))
        if slack is None:
            continue
        hits += 1
        if slack < min_slack:
            min_slack = slack
            argmin = info
    extra = {}
    if hits != trials:
        extra["hypothesis_hits"] = hits
    if hits == 0:
        return CheckResult(name, trials, math.inf, {}, True, extra)
    return CheckResult(name, trials, min_slack, argmin, min_slack >= -1e-9, extra)


def run_suite(seed: int, trials: int = 1000, names=None) -> SuiteReport:
    """Run the randomized checks with per-trial seeds derived from
    (seed, check name, trial index); deterministic for fixed arguments."""
    names = list(SUITE_CHECKS) if names is None else list(names)
    results = tuple(run_check(name, seed, trials) for name in names)
    return SuiteReport(seed=seed, trials=trials, results=results)
