"""Generalized matrix functions and their scalar inequality images.

The central quantity is the permutation-weighted sum

    d(X) = sum over sigma in G of  chi(sigma) * prod_i X[i, sigma(i)]

for a permutation group G and character chi.  With G the full symmetric
group this is the determinant for the sign character, the permanent for
the trivial character, and an immanant for any other partition label.

Applying d to each operator term of a tensor-sum inequality (in place of
Kronecker powers) yields the scalar corollaries checked here.  The
permanent additionally has an independent inclusion-exclusion oracle so
the two routes can cross-check each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb, fsum

import numpy as np

from .errors import BudgetError, InputError
from .linalg import HermitianMatrix
from .sums import OperatorFamily, TensorSumParams
from .symgroup import CharacterSpec, GroupSpec, character_values, enumerate_group

#: Ryser evaluation enumerates 2^m column subsets; refuse beyond this.
MAX_PERMANENT_DIM = 12


def _as_square_array(x) -> np.ndarray:
    if isinstance(x, HermitianMatrix):
        return x.array
    arr = np.asarray(x, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise InputError(f"expected a nonempty square matrix, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise InputError("matrix entries must be finite")
    return arr


@lru_cache(maxsize=64)
def _group_data(group: GroupSpec, chi: CharacterSpec) -> tuple[np.ndarray, np.ndarray]:
    elements = enumerate_group(group)
    perms = np.array(elements, dtype=np.intp)
    chis = character_values(group, chi, elements)
    return perms, chis


def generalized_matrix_function(x, group: GroupSpec, chi: CharacterSpec) -> complex:
    """Evaluate d(X) = sum_sigma chi(sigma) prod_i X[i, sigma(i)]."""
    arr = _as_square_array(x)
    m = arr.shape[0]
    if m != group.degree:
        raise InputError(f"matrix dimension {m} does not match group degree {group.degree}")
    perms, chis = _group_data(group, chi)
    rows = np.arange(m)
    products = arr[rows[np.newaxis, :], perms].prod(axis=1)
    return complex(chis @ products)


def determinant_via_elimination(x) -> complex:
    """Gaussian-elimination determinant with partial pivoting.

    The independent route for the sign character.  A product of pivots,
    so 1x1 and diagonal inputs are exact (numpy's det is not).
    """
    a = _as_square_array(x).copy()
    m = a.shape[0]
    det = 1.0 + 0.0j
    for col in range(m):
        pivot_row = col + int(np.argmax(np.abs(a[col:, col])))
        pivot = a[pivot_row, col]
        if pivot == 0:
            return 0j
        if pivot_row != col:
            a[[col, pivot_row]] = a[[pivot_row, col]]
            det = -det
        det *= pivot
        if col + 1 < m:
            factors = a[col + 1 :, col] / pivot
            a[col + 1 :, col:] -= factors[:, np.newaxis] * a[col, col:]
    return complex(det)


def permanent_oracle(x) -> complex:
    """Permanent by Ryser's inclusion-exclusion over column subsets.

    Gray-code ordering updates one column sum per step, so the cost is
    O(2^m * m).  Independent of :func:`generalized_matrix_function`.
    """
    arr = _as_square_array(x)
    m = arr.shape[0]
    if m > MAX_PERMANENT_DIM:
        raise BudgetError(f"permanent oracle limited to dim <= {MAX_PERMANENT_DIM}, got {m}")
    row_sums = np.zeros(m, dtype=np.complex128)
    total = 0.0 + 0.0j
    prev_gray = 0
    for counter in range(1, 1 << m):
        gray = counter ^ (counter >> 1)
        bit = prev_gray ^ gray
        col = bit.bit_length() - 1
        if gray & bit:
            row_sums += arr[:, col]
        else:
            row_sums -= arr[:, col]
        subset_size = gray.bit_count()
        term = row_sums.prod()
        total += term if (m - subset_size) % 2 == 0 else -term
        prev_gray = gray
    return complex(total)


def elementary_symmetric_det(mats, k: int) -> float:
    """Sum of determinants of all size-k subset sums of Hermitian inputs."""
    hs = [m if isinstance(m, HermitianMatrix) else HermitianMatrix(m) for m in mats]
    n = len(hs)
    if not 1 <= k <= n:
        raise InputError(f"k must satisfy 1 <= k <= {n}, got {k}")
    if any(h.dim != hs[0].dim for h in hs):
        raise InputError("all matrices must share one dimension")
    terms = []
    for idx in combinations(range(n), k):
        subset = hs[idx[0]]
        for i in idx[1:]:
            subset = subset + hs[i]
        terms.append(determinant_via_elimination(subset.array).real)
    return fsum(terms)


# ---------------------------------------------------------------------------
# Scalar inequality images
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScalarInequalityResult:
    lhs: float
    rhs: float
    margin: float
    scale: float
    holds: bool


def family_terms(
    family: OperatorFamily, n: int, params: TensorSumParams
) -> tuple[list[tuple[float, tuple[int, ...]]], list[tuple[float, tuple[int, ...]]]]:
    """Weighted subset terms (coefficient, index subset) of LHS and RHS."""
    everyone = tuple(range(n))
    singles = [(i,) for i in range(n)]
    if family is OperatorFamily.HLAWKA3:
        if n != 3:
            raise InputError("hlawka3 takes exactly three matrices")
        return (
            [(1.0, everyone)] + [(1.0, s) for s in singles],
            [(1.0, pair) for pair in combinations(range(3), 2)],
        )
    if family is OperatorFamily.SUPERMOD:
        if n != 3:
            raise InputError("supermod takes exactly three matrices")
        return ([(1.0, everyone), (1.0, (0,))], [(1.0, (0, 1)), (1.0, (0, 2))])
    if family is OperatorFamily.SUPERADD:
        if n < 2:
            raise InputError("superadd needs n >= 2")
        return ([(1.0, everyone)], [(1.0, s) for s in singles])
    if family is OperatorFamily.ALTERNATING:
        if n < 3:
            raise InputError("alternating needs n >= 3")
        lhs = [
            (1.0, idx)
            for j in range(n, 0, -2)
            for idx in combinations(range(n), j)
        ]
        rhs = [
            (1.0, idx)
            for j in range(n - 1, 0, -2)
            for idx in combinations(range(n), j)
        ]
        return lhs, rhs
    if family is OperatorFamily.POP_PAIRS:
        if n < 3:
            raise InputError("pop-pairs needs n >= 3")
        lhs = [(float(n - 2), s) for s in singles] + [(1.0, everyone)]
        rhs = [(1.0, pair) for pair in combinations(range(n), 2)]
        return lhs, rhs
    if family is OperatorFamily.POP_SUBSETS:
        m = params.m
        if m is None or not 2 <= m < n:
            raise InputError(f"pop-subsets needs 2 <= m < n, got m={m}, n={n}")
        lhs = [(float(comb(n - 2, m - 1)), s) for s in singles]
        lhs.append((float(comb(n - 2, m - 2)), everyone))
        rhs = [(1.0, idx) for idx in combinations(range(n), m)]
        return lhs, rhs
    if family is OperatorFamily.POP_LEVELS:
        k, ell, m = params.k, params.ell, params.m
        if k is None or ell is None or m is None or not 1 <= k < ell < m <= n:
            raise InputError(f"pop-levels needs 1 <= k < ell < m <= n, got ({k}, {ell}, {m})")
        c_low = (m - ell) / (k * comb(n, k))
        c_high = (ell - k) / (m * comb(n, m))
        c_mid = (m - k) / (ell * comb(n, ell))
        lhs = [(c_low, idx) for idx in combinations(range(n), k)]
        lhs += [(c_high, idx) for idx in combinations(range(n), m)]
        rhs = [(c_mid, idx) for idx in combinations(range(n), ell)]
        return lhs, rhs
    raise InputError(f"unknown family {family}")


def scalar_inequality_check(
    family: OperatorFamily,
    mats,
    params: TensorSumParams,
    group: GroupSpec,
    chi: CharacterSpec,
    tol: float = 1e-10,
) -> ScalarInequalityResult:
    """Check the d-image of a family's inequality on Hermitian inputs.

    Each operator term (a subset sum) is mapped through the generalized
    matrix function instead of a Kronecker power; subset sizes and
    coefficients are unchanged.  For positive semidefinite inputs the
    values are real up to rounding; the real parts are compared.
    """
    hs = [m if isinstance(m, HermitianMatrix) else HermitianMatrix(m) for m in mats]
    n = len(hs)
    if any(h.dim != group.degree for h in hs):
        raise InputError("matrix dimension must equal the group degree")
    lhs_terms, rhs_terms = family_terms(family, n, params)

    def evaluate(weighted):
        values = []
        for coef, idx in weighted:
            subset = hs[idx[0]]
            for i in idx[1:]:
                subset = subset + hs[i]
            values.append(coef * generalized_matrix_function(subset, group, chi).real)
        return values

    lhs_values = evaluate(lhs_terms)
    rhs_values = evaluate(rhs_terms)
    lhs = fsum(lhs_values)
    rhs = fsum(rhs_values)
    margin = lhs - rhs
    scale = max(1.0, fsum(abs(v) for v in lhs_values) + fsum(abs(v) for v in rhs_values))
    return ScalarInequalityResult(
        lhs=lhs, rhs=rhs, margin=margin, scale=scale, holds=margin >= -tol * scale
    )


def parse_character_selector(selector: str, dim: int) -> tuple[GroupSpec, CharacterSpec]:
    """Resolve ``det`` / ``perm`` / ``partition=<parts>`` selectors for S_dim."""
    group = GroupSpec.full_symmetric(dim)
    if selector == "det":
        return group, CharacterSpec.sign()
    if selector == "perm":
        return group, CharacterSpec.trivial()
    if selector.startswith("partition="):
        parts = selector[len("partition="):]
        try:
            lam = tuple(int(x) for x in parts.split(","))
        except ValueError as exc:
            raise InputError(f"unparseable partition {parts!r}") from exc
        if sum(lam) != dim:
            raise InputError(f"partition {lam} does not sum to the dimension {dim}")
        return group, CharacterSpec.from_partition(lam)
    raise InputError(f"unknown character selector {selector!r}")
