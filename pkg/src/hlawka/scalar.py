"""Scalar and norm-space inequality evaluators and counterexample search.

Margins are always LHS - RHS; a check "holds" when the margin is at worst
-1e-12 relative to the magnitude scale of its own terms.  Two kinds of
evaluator live here:

* proven inequalities (triangle/Hlawka norm inequalities, Jensen,
  Popoviciu and its generalizations) whose margins the trial suites
  assert nonnegative, and
* plain evaluators for statements that are conjectural or known to fail
  (the functional Hlawka form, the alternating norm sum, the alternating
  subset-mean pattern), which only measure.

All evaluators canonically sort their input points first, so permuting
the inputs cannot change a single bit of the result, and per-term sums
use ``math.fsum`` so algebraically equal expressions agree exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from math import comb, fsum

import numpy as np

from .errors import InputError
from .util import derive_seed

#: Default relative tolerance deciding whether a scalar margin "holds".
DEFAULT_SCALAR_TOL = 1e-12

CONVEX_KINDS = ("abs", "square", "fourth", "exp", "relu", "softplus")


@dataclass(frozen=True)
class ConvexFunction:
    """One of a fixed catalog of convex functions on the real line.

    ``shift`` and ``scale`` pre-compose an affine map, f(x) =
    base(scale * (x - shift)), which preserves convexity for any values.
    The catalog is fixed because convexity of arbitrary user code cannot
    be verified.
    """

    kind: str
    shift: float = 0.0
    scale: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in CONVEX_KINDS:
            raise InputError(f"unknown convex function {self.kind!r}; choose from {CONVEX_KINDS}")

    def __call__(self, x: float) -> float:
        y = self.scale * (float(x) - self.shift)
        if self.kind == "abs":
            return abs(y)
        if self.kind == "square":
            return y * y
        if self.kind == "fourth":
            return y**4
        if self.kind == "exp":
            return math.exp(y)
        if self.kind == "relu":
            return y if y > 0.0 else 0.0
        # softplus, evaluated stably on both tails
        if y > 0.0:
            return y + math.log1p(math.exp(-y))
        return math.log1p(math.exp(y))


def convex_catalog() -> tuple[ConvexFunction, ...]:
    return tuple(ConvexFunction(kind) for kind in CONVEX_KINDS)


@dataclass(frozen=True)
class ScalarCheckResult:
    lhs: float
    rhs: float
    margin: float
    scale: float
    holds: bool


def _result(lhs_terms, rhs_terms, tol: float = DEFAULT_SCALAR_TOL) -> ScalarCheckResult:
    lhs_terms = list(lhs_terms)
    rhs_terms = list(rhs_terms)
    lhs = fsum(lhs_terms)
    rhs = fsum(rhs_terms)
    margin = lhs - rhs
    scale = max(1.0, fsum(abs(t) for t in lhs_terms) + fsum(abs(t) for t in rhs_terms))
    return ScalarCheckResult(lhs=lhs, rhs=rhs, margin=margin, scale=scale, holds=margin >= -tol * scale)


def _sorted_points(xs) -> list[float]:
    pts = [float(x) for x in xs]
    if not all(math.isfinite(x) for x in pts):
        raise InputError("points must be finite")
    return sorted(pts)


def _sorted_vectors(vectors) -> np.ndarray:
    arr = np.asarray(vectors, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[:, np.newaxis]
    if arr.ndim != 2:
        raise InputError("expected a list of equal-length real vectors")
    if not np.isfinite(arr).all():
        raise InputError("vector entries must be finite")
    order = sorted(range(arr.shape[0]), key=lambda i: tuple(arr[i]))
    return arr[order]


def _norm(v: np.ndarray, ord: float = 2) -> float:
    return float(np.linalg.norm(v, ord))


# ---------------------------------------------------------------------------
# Norm-space checks
# ---------------------------------------------------------------------------


def norm_hlawka(a, b, c, ord: float = 2) -> ScalarCheckResult:
    """||a+b+c|| + ||a|| + ||b|| + ||c||  vs  pairwise sums."""
    vs = _sorted_vectors([a, b, c])
    a, b, c = vs
    lhs = [_norm(a + b + c, ord), _norm(a, ord), _norm(b, ord), _norm(c, ord)]
    rhs = [_norm(a + b, ord), _norm(a + c, ord), _norm(b + c, ord)]
    return _result(lhs, rhs)


def freudenthal_alternating(vectors, ord: float = 2) -> ScalarCheckResult:
    """Alternating sum of subset-sum norms; size-k subsets carry (-1)^(k-1).

    An evaluator only: the statement is known to fail for four or more
    vectors, so negative margins are findings, not errors.
    """
    arr = _sorted_vectors(vectors)
    n = arr.shape[0]
    if n < 3:
        raise InputError("need at least three vectors")
    lhs, rhs = [], []
    for k in range(1, n + 1):
        bucket = lhs if k % 2 == 1 else rhs
        for idx in combinations(range(n), k):
            bucket.append(_norm(arr[list(idx)].sum(axis=0), ord))
    return _result(lhs, rhs)


def radu_check(vectors, k: int, ord: float = 2) -> ScalarCheckResult:
    """Binomially weighted bound on the size-k subset-sum norms."""
    arr = _sorted_vectors(vectors)
    n = arr.shape[0]
    if n < 3:
        raise InputError("need at least three vectors")
    if not 2 <= k <= n:
        raise InputError(f"need 2 <= k <= {n}, got {k}")
    c_single = comb(n - 2, k - 1)
    c_total = comb(n - 2, k - 2)
    lhs = [c_single * _norm(arr[i], ord) for i in range(n)]
    lhs.append(c_total * _norm(arr.sum(axis=0), ord))
    rhs = [_norm(arr[list(idx)].sum(axis=0), ord) for idx in combinations(range(n), k)]
    return _result(lhs, rhs)


# ---------------------------------------------------------------------------
# Convex-function checks
# ---------------------------------------------------------------------------


def functional_hlawka(f: ConvexFunction, a: float, b: float, c: float) -> ScalarCheckResult:
    """f(a+b+c)+f(a)+f(b)+f(c) vs pair values.  Evaluator only: convexity
    does not guarantee a nonnegative margin."""
    a, b, c = _sorted_points([a, b, c])
    lhs = [f(a + b + c), f(a), f(b), f(c)]
    rhs = [f(a + b), f(a + c), f(b + c)]
    return _result(lhs, rhs)


def jensen_check(f: ConvexFunction, xs) -> ScalarCheckResult:
    """sum f(x_i)  vs  k f(mean)."""
    pts = _sorted_points(xs)
    if not pts:
        raise InputError("need at least one point")
    k = len(pts)
    mean = fsum(pts) / k
    return _result([f(x) for x in pts], [k * f(mean)])


def popoviciu_check(f: ConvexFunction, x1: float, x2: float, x3: float) -> ScalarCheckResult:
    """f(x1)+f(x2)+f(x3)+3 f(mean)  vs  2 * (pairwise midpoint values)."""
    a, b, c = _sorted_points([x1, x2, x3])
    mean = fsum((a, b, c)) / 3.0
    lhs = [f(a), f(b), f(c), 3.0 * f(mean)]
    rhs = [2.0 * f((a + b) / 2.0), 2.0 * f((a + c) / 2.0), 2.0 * f((b + c) / 2.0)]
    return _result(lhs, rhs)


def vasc_check(f: ConvexFunction, xs) -> ScalarCheckResult:
    """sum f(x_i) + (n/(n-2)) f(mean)  vs  (2/(n-2)) * midpoint values."""
    pts = _sorted_points(xs)
    n = len(pts)
    if n < 3:
        raise InputError(f"need n >= 3 points, got {n}")
    mean = fsum(pts) / n
    lhs = [f(x) for x in pts]
    lhs.append(n / (n - 2) * f(mean))
    rhs = [2.0 / (n - 2) * f((pts[i] + pts[j]) / 2.0) for i, j in combinations(range(n), 2)]
    return _result(lhs, rhs)


def pcz_check(f: ConvexFunction, xs, m: int) -> ScalarCheckResult:
    """C(n-2,m-1) sum f(x_i) + n C(n-2,m-2) f(mean)  vs  m * size-m subset means."""
    pts = _sorted_points(xs)
    n = len(pts)
    if not 2 <= m < n:
        raise InputError(f"need 2 <= m < n, got m={m}, n={n}")
    mean = fsum(pts) / n
    c_single = comb(n - 2, m - 1)
    c_total = n * comb(n - 2, m - 2)
    lhs = [c_single * f(x) for x in pts]
    lhs.append(c_total * f(mean))
    rhs = [m * f(fsum(pts[i] for i in idx) / m) for idx in combinations(range(n), m)]
    return _result(lhs, rhs)


def pop_levels_scalar_eval(f: ConvexFunction, xs, k: int, ell: int, m: int) -> ScalarCheckResult:
    """Three-level subset-mean comparison with the tensor-sum weights.

    Measures only: the direction is known to depend on (k, ell, m), so no
    suite asserts a sign for this family.
    """
    pts = _sorted_points(xs)
    n = len(pts)
    if not 1 <= k < ell < m <= n:
        raise InputError(f"need 1 <= k < ell < m <= n, got ({k}, {ell}, {m}), n={n}")

    def level(size: int) -> list[float]:
        return [size * f(fsum(pts[i] for i in idx) / size) for idx in combinations(range(n), size)]

    c_low = (m - ell) / (k * comb(n, k))
    c_high = (ell - k) / (m * comb(n, m))
    c_mid = (m - k) / (ell * comb(n, ell))
    lhs = [c_low * t for t in level(k)] + [c_high * t for t in level(m)]
    rhs = [c_mid * t for t in level(ell)]
    return _result(lhs, rhs)


def conjecture_hlawka_pop_eval(f: ConvexFunction, xs) -> ScalarCheckResult:
    """Alternating subset-mean pattern: size-k subsets contribute
    k * f(mean) to the LHS for odd k and to the RHS for even k.

    Fails for four points (margins may be negative); evaluator only.
    """
    pts = _sorted_points(xs)
    n = len(pts)
    if n < 3:
        raise InputError(f"need n >= 3 points, got {n}")
    lhs, rhs = [], []
    for k in range(1, n + 1):
        bucket = lhs if k % 2 == 1 else rhs
        for idx in combinations(range(n), k):
            bucket.append(k * f(fsum(pts[i] for i in idx) / k))
    return _result(lhs, rhs)


#: The refuting input for the alternating subset-mean pattern at n=4 with
#: the absolute value: margin is exactly -2.
KNOWN_HLAWKA_POP_COUNTEREXAMPLE = (-10.0, 1.0, 1.0, 9.0)


# ---------------------------------------------------------------------------
# Counterexample search
# ---------------------------------------------------------------------------


class SearchFamily(Enum):
    FREUDENTHAL = "freudenthal"
    HLAWKA_POP = "hlawka-pop"


class SearchStrategy(Enum):
    RANDOM = "random"
    COORDINATE_DESCENT = "coordinate-descent"


@dataclass(frozen=True)
class SearchConfig:
    n: int
    dim: int = 2
    trials: int = 1000
    seed: int = 0
    strategy: SearchStrategy = SearchStrategy.RANDOM
    fn: ConvexFunction = field(default_factory=lambda: ConvexFunction("abs"))
    include_known: bool = False
    center: tuple[float, ...] | None = None
    radius: float = 2.0
    ord: float = 2


@dataclass(frozen=True)
class SearchViolation:
    trial_index: int
    seed: int
    inputs: tuple
    margin: float
    scale: float


def _search_margin(family: SearchFamily, cfg: SearchConfig, point: np.ndarray) -> ScalarCheckResult:
    if family is SearchFamily.FREUDENTHAL:
        return freudenthal_alternating(point.reshape(cfg.n, cfg.dim), ord=cfg.ord)
    return conjecture_hlawka_pop_eval(cfg.fn, point.ravel())


def _flat_size(family: SearchFamily, cfg: SearchConfig) -> int:
    return cfg.n * cfg.dim if family is SearchFamily.FREUDENTHAL else cfg.n


def _sample_point(family: SearchFamily, cfg: SearchConfig, rng: np.random.Generator) -> np.ndarray:
    size = _flat_size(family, cfg)
    if cfg.center is not None:
        center = np.asarray(cfg.center, dtype=np.float64)
        if center.size != size:
            raise InputError(f"center must have {size} coordinates, got {center.size}")
        return center + rng.uniform(-cfg.radius, cfg.radius, size)
    if family is SearchFamily.FREUDENTHAL:
        return rng.standard_normal(size)
    return rng.uniform(-10.0, 10.0, size)


def _coordinate_descent(
    family: SearchFamily, cfg: SearchConfig, start: np.ndarray
) -> np.ndarray:
    # Greedy per-coordinate minimization of the margin with a shrinking
    # step schedule; deterministic given the start point.
    point = start.copy()
    best = _search_margin(family, cfg, point).margin
    for step in (4.0, 2.0, 1.0, 0.5, 0.25, 0.125, 0.0625):
        improved = True
        sweeps = 0
        while improved and sweeps < 20:
            improved = False
            sweeps += 1
            for i in range(point.size):
                for delta in (step, -step):
                    trial = point.copy()
                    trial[i] += delta
                    margin = _search_margin(family, cfg, trial).margin
                    if margin < best - 1e-15:
                        best = margin
                        point = trial
                        improved = True
    return point


def counterexample_search(family: SearchFamily, cfg: SearchConfig) -> list[SearchViolation]:
    """Search for inputs with a genuinely negative margin.

    Deterministic under the seed: trial t uses the seed derived from
    (seed, t), so results do not depend on execution order.  Every
    candidate is re-verified by a fresh evaluation of its rounded inputs
    before being reported.  An empty result is a valid outcome.
    """
    if cfg.n < 3:
        raise InputError("search needs n >= 3")
    violations: list[SearchViolation] = []
    for t in range(cfg.trials):
        trial_seed = derive_seed(cfg.seed, t)
        rng = np.random.default_rng(trial_seed)
        if t == 0 and cfg.include_known and family is SearchFamily.HLAWKA_POP and cfg.n == 4:
            point = np.asarray(KNOWN_HLAWKA_POP_COUNTEREXAMPLE)
        else:
            point = _sample_point(family, cfg, rng)
        if cfg.strategy is SearchStrategy.COORDINATE_DESCENT:
            point = _coordinate_descent(family, cfg, point)
        candidate = _search_margin(family, cfg, point)
        if candidate.margin >= -DEFAULT_SCALAR_TOL * candidate.scale:
            continue
        # Fresh evaluation of the exact values we are about to report.
        inputs = tuple(float(x) for x in point.ravel())
        confirmed = _search_margin(family, cfg, np.asarray(inputs))
        if confirmed.margin < -DEFAULT_SCALAR_TOL * confirmed.scale:
            if family is SearchFamily.FREUDENTHAL:
                reported: tuple = tuple(
                    tuple(row) for row in np.asarray(inputs).reshape(cfg.n, cfg.dim)
                )
            else:
                reported = inputs
            violations.append(
                SearchViolation(
                    trial_index=t,
                    seed=trial_seed,
                    inputs=reported,
                    margin=confirmed.margin,
                    scale=confirmed.scale,
                )
            )
    return violations
