"""Permutation groups, integer partitions, and symmetric group characters.

Permutations are tuples of images on ``{0, ..., m-1}`` (0-based
throughout).  Partitions are weakly decreasing tuples of positive
integers; they label both irreducible characters of the symmetric group
and conjugacy classes (as cycle types).  Irreducible character values are
computed by the Murnaghan-Nakayama recursion in exact integer arithmetic.
"""

from __future__ import annotations

import itertools
import json
import math
import os
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np

from .errors import BudgetError, InputError

#: Largest m for which the full symmetric group may be enumerated (8! = 40320).
MAX_SYMMETRIC_DEGREE = 8

#: Largest permitted group order for explicit element lists.
MAX_GROUP_ORDER = math.factorial(MAX_SYMMETRIC_DEGREE)


# ---------------------------------------------------------------------------
# Permutations
# ---------------------------------------------------------------------------


def validate_permutation(images) -> tuple[int, ...]:
    perm = tuple(int(x) for x in images)
    if sorted(perm) != list(range(len(perm))):
        raise InputError(f"not a permutation of 0..{len(perm) - 1}: {perm}")
    return perm


def compose(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    """(p o q)(i) = p(q(i))."""
    return tuple(p[q[i]] for i in range(len(p)))


def inverse(p: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(p)
    for i, img in enumerate(p):
        inv[img] = i
    return tuple(inv)


def permutation_sign(p: tuple[int, ...]) -> int:
    return -1 if (len(p) - _num_cycles(p)) % 2 else 1


def _num_cycles(p: tuple[int, ...]) -> int:
    seen = [False] * len(p)
    count = 0
    for start in range(len(p)):
        if seen[start]:
            continue
        count += 1
        j = start
        while not seen[j]:
            seen[j] = True
            j = p[j]
    return count


def cycle_type(p: tuple[int, ...]) -> tuple[int, ...]:
    """Cycle lengths of a permutation as a partition (sorted descending)."""
    seen = [False] * len(p)
    lengths = []
    for start in range(len(p)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        lengths.append(length)
    return tuple(sorted(lengths, reverse=True))


# ---------------------------------------------------------------------------
# Partitions
# ---------------------------------------------------------------------------


def validate_partition(parts) -> tuple[int, ...]:
    lam = tuple(int(x) for x in parts)
    if not lam:
        raise InputError("partition must be nonempty")
    if any(x < 1 for x in lam):
        raise InputError(f"partition parts must be positive: {lam}")
    if any(lam[i] < lam[i + 1] for i in range(len(lam) - 1)):
        raise InputError(f"partition parts must be weakly decreasing: {lam}")
    return lam


def partitions_of(m: int):
    """Yield all partitions of m in descending lexicographic order."""
    if m < 0:
        raise InputError("m must be nonnegative")

    def _gen(remaining: int, cap: int, prefix: tuple[int, ...]):
        if remaining == 0:
            yield prefix
            return
        for part in range(min(cap, remaining), 0, -1):
            yield from _gen(remaining - part, part, prefix + (part,))

    yield from _gen(m, m, ())


def class_size(mu: tuple[int, ...]) -> int:
    """Number of permutations in S_m with cycle type mu (exact integer)."""
    mu = validate_partition(mu)
    m = sum(mu)
    z = 1
    for length, reps in _multiplicities(mu).items():
        z *= length**reps * math.factorial(reps)
    return math.factorial(m) // z


def _multiplicities(mu: tuple[int, ...]) -> dict[int, int]:
    out: dict[int, int] = {}
    for part in mu:
        out[part] = out.get(part, 0) + 1
    return out


# ---------------------------------------------------------------------------
# Murnaghan-Nakayama recursion
# ---------------------------------------------------------------------------


def mn_character(lam, mu) -> int:
    """Irreducible character of S_m: value of chi_lam on the class mu.

    Uses the border-strip (beta-number) form of the Murnaghan-Nakayama
    rule.  Exact integer arithmetic; memoized on (lam, mu).
    """
    lam = validate_partition(lam)
    mu = validate_partition(mu)
    if sum(lam) != sum(mu):
        raise InputError(f"|lam| = {sum(lam)} but |mu| = {sum(mu)}")
    return _mn(lam, mu)


@lru_cache(maxsize=None)
def _mn(lam: tuple[int, ...], mu: tuple[int, ...]) -> int:
    if not mu:
        return 1
    strip, rest = mu[0], mu[1:]
    # Beta numbers: first-column hook lengths lam_i + (len - 1 - i).
    # Removing a border strip of length `strip` moves one beta number b
    # down to b - strip; the strip height is the count of beta numbers
    # strictly between the two, and contributes the sign.
    ell = len(lam)
    beta = sorted(lam[i] + (ell - 1 - i) for i in range(ell))
    beta_set = set(beta)
    total = 0
    for pos, b in enumerate(beta):
        c = b - strip
        if c < 0 or c in beta_set:
            continue
        height = sum(1 for x in beta if c < x < b)
        new_beta = sorted(beta_set - {b} | {c}, reverse=True)
        new_lam = tuple(
            nb - (ell - 1 - i) for i, nb in enumerate(new_beta) if nb - (ell - 1 - i) > 0
        )
        total += (-1) ** height * _mn(new_lam, rest)
    return total


# ---------------------------------------------------------------------------
# Group and character specifications
# ---------------------------------------------------------------------------


class GroupKind(Enum):
    FULL_SYMMETRIC = "FULL_SYMMETRIC"
    EXPLICIT = "EXPLICIT"


@dataclass(frozen=True)
class GroupSpec:
    """A permutation group: S_m by degree, or an explicit element list."""

    kind: GroupKind
    degree: int
    elements: tuple[tuple[int, ...], ...] = ()

    @classmethod
    def full_symmetric(cls, m: int) -> "GroupSpec":
        if m < 1:
            raise InputError("degree must be >= 1")
        return cls(kind=GroupKind.FULL_SYMMETRIC, degree=m)

    @classmethod
    def explicit(cls, perms) -> "GroupSpec":
        elems = tuple(validate_permutation(p) for p in perms)
        if not elems:
            raise InputError("explicit group needs at least one element")
        degree = len(elems[0])
        if any(len(p) != degree for p in elems):
            raise InputError("all permutations must act on the same number of letters")
        return cls(kind=GroupKind.EXPLICIT, degree=degree, elements=elems)


class CharacterKind(Enum):
    PARTITION = "PARTITION"
    SIGN = "SIGN"
    TRIVIAL = "TRIVIAL"
    TABLE = "TABLE"


@dataclass(frozen=True)
class CharacterSpec:
    """Which character weighs the permutation sum.

    PARTITION is valid only for a full symmetric group; SIGN and TRIVIAL
    restrict to any permutation group; TABLE supplies one complex value
    per element of an explicit group.  Table characters are validated for
    chi(id) > 0 and |chi(g)| <= chi(id) but irreducibility is not checked.
    """

    kind: CharacterKind
    partition: tuple[int, ...] | None = None
    table: tuple[complex, ...] = field(default=())

    @classmethod
    def sign(cls) -> "CharacterSpec":
        return cls(kind=CharacterKind.SIGN)

    @classmethod
    def trivial(cls) -> "CharacterSpec":
        return cls(kind=CharacterKind.TRIVIAL)

    @classmethod
    def from_partition(cls, lam) -> "CharacterSpec":
        return cls(kind=CharacterKind.PARTITION, partition=validate_partition(lam))

    @classmethod
    def from_table(cls, values) -> "CharacterSpec":
        return cls(kind=CharacterKind.TABLE, table=tuple(complex(v) for v in values))


def enumerate_group(spec: GroupSpec) -> list[tuple[int, ...]]:
    """All group elements in deterministic (lexicographic) order.

    Explicit lists are validated for closure under composition and
    inverse; a violation is an input error.  Full symmetric groups are
    guarded at degree 8 (order 40320).
    """
    if spec.kind is GroupKind.FULL_SYMMETRIC:
        if spec.degree > MAX_SYMMETRIC_DEGREE:
            raise BudgetError(
                f"S_{spec.degree} has {math.factorial(spec.degree)} elements; "
                f"the guard allows degree <= {MAX_SYMMETRIC_DEGREE}"
            )
        return [tuple(p) for p in itertools.permutations(range(spec.degree))]

    elems = sorted(set(spec.elements))
    if len(elems) > MAX_GROUP_ORDER:
        raise BudgetError(f"group order {len(elems)} exceeds guard {MAX_GROUP_ORDER}")
    _validate_closure(elems, spec.degree)
    return elems


def _validate_closure(elems: list[tuple[int, ...]], degree: int) -> None:
    member = set(elems)
    identity = tuple(range(degree))
    if identity not in member:
        raise InputError("explicit group does not contain the identity")
    for p in elems:
        if inverse(p) not in member:
            raise InputError(f"explicit group is not closed under inverse: {p}")
    # Vectorized row composition keeps the O(|G|^2) check affordable.
    arr = np.array(elems, dtype=np.int64)
    for p in elems:
        composed = np.asarray(p, dtype=np.int64)[arr]
        for row in composed:
            if tuple(int(x) for x in row) not in member:
                raise InputError("explicit group is not closed under composition")


def character_values(spec: GroupSpec, chi: CharacterSpec, elements: list[tuple[int, ...]]) -> np.ndarray:
    """Character value per element, aligned with ``elements`` order."""
    if chi.kind is CharacterKind.TRIVIAL:
        return np.ones(len(elements), dtype=np.complex128)
    if chi.kind is CharacterKind.SIGN:
        return np.array([permutation_sign(p) for p in elements], dtype=np.complex128)
    if chi.kind is CharacterKind.PARTITION:
        if spec.kind is not GroupKind.FULL_SYMMETRIC:
            raise InputError("partition characters require the full symmetric group")
        lam = chi.partition
        if lam is None or sum(lam) != spec.degree:
            raise InputError(f"partition {lam} does not label a character of S_{spec.degree}")
        cache: dict[tuple[int, ...], int] = {}
        vals = np.empty(len(elements), dtype=np.complex128)
        for i, p in enumerate(elements):
            ct = cycle_type(p)
            if ct not in cache:
                cache[ct] = mn_character(lam, ct)
            vals[i] = cache[ct]
        return vals
    if chi.kind is CharacterKind.TABLE:
        if len(chi.table) != len(elements):
            raise InputError(
                f"character table covers {len(chi.table)} elements, group has {len(elements)}"
            )
        vals = np.asarray(chi.table, dtype=np.complex128)
        ident_idx = elements.index(tuple(range(len(elements[0]))))
        chi_id = vals[ident_idx]
        if not (chi_id.imag == 0 and chi_id.real > 0):
            raise InputError("table character must have chi(identity) real and positive")
        if np.any(np.abs(vals) > chi_id.real * (1 + 1e-12)):
            raise InputError("table character has |chi(g)| > chi(identity)")
        return vals
    raise InputError(f"unsupported character kind {chi.kind}")


# ---------------------------------------------------------------------------
# Character table file: JSON with "elements" (image sequences, one of which
# must be the identity) and "values" ([re, im] per element, same order).
# ---------------------------------------------------------------------------


def load_character_table(path: str | os.PathLike) -> tuple[GroupSpec, CharacterSpec]:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"unparseable character table: {exc}") from exc
    if not isinstance(doc, dict) or "elements" not in doc or "values" not in doc:
        raise InputError('character table must contain "elements" and "values"')
    elements = [validate_permutation(p) for p in doc["elements"]]
    values = doc["values"]
    if len(values) != len(elements):
        raise InputError("character table needs one value per element")
    # Keep values aligned with the deterministic element order.
    order = sorted(range(len(elements)), key=lambda i: elements[i])
    group = GroupSpec.explicit([elements[i] for i in order])
    vals = []
    for i in order:
        pair = values[i]
        if not (isinstance(pair, list) and len(pair) == 2):
            raise InputError("character values must be [re, im] pairs")
        vals.append(complex(float(pair[0]), float(pair[1])))
    return group, CharacterSpec.from_table(vals)


def save_character_table(path: str | os.PathLike, elements, values) -> None:
    doc = {
        "elements": [list(validate_permutation(p)) for p in elements],
        "values": [[complex(v).real, complex(v).imag] for v in values],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)
        fh.write("\n")
