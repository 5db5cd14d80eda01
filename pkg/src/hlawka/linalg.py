"""Dense complex Hermitian matrix algebra.

Provides the carrier type for all operator computations
(:class:`HermitianMatrix`), Kronecker products and tensor powers,
eigenvalue-based positive-semidefiniteness certificates for the Loewner
partial order, reproducible positive definite sampling, and the on-disk
matrix format used by the CLI.

All values are immutable and all operations are pure functions, so they
may be shared freely between threads.  Arithmetic is fixed double
precision (complex128).
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import BudgetError, InputError
from .util import array_digest, format_sig17

#: Refuse to build matrices larger than this on a side unless overridden.
DEFAULT_MAX_TENSOR_DIM = 4096

#: Default relative tolerance for Loewner-order certificates.
DEFAULT_LOEWNER_TOL = 1e-8

#: Input matrices may deviate from exact hermiticity by this fraction of
#: their largest absolute entry before being rejected.
HERMITICITY_RTOL = 1e-12


class Verdict(Enum):
    """Outcome of a Loewner-order check ``A >= B``."""

    HOLDS = "HOLDS"
    FAILS = "FAILS"
    EQUALITY = "EQUALITY"


class SpectrumKind(Enum):
    """Eigenvalue spacing used by :func:`random_pd`."""

    UNIFORM = "UNIFORM"
    LOGUNIFORM = "LOGUNIFORM"


class HermitianMatrix:
    """Immutable dense complex Hermitian matrix.

    Construction validates that the input is square, finite, and Hermitian
    within ``HERMITICITY_RTOL`` of its largest absolute entry, then stores
    the exactly symmetrized form ``(X + X*) / 2``.  Diagonal imaginary
    parts cancel exactly under IEEE arithmetic, so stored diagonals are
    real.  The underlying array is marked read-only.
    """

    __slots__ = ("_arr", "_digest")

    def __init__(self, entries) -> None:
        arr = np.asarray(entries, dtype=np.complex128)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise InputError(f"expected a nonempty square matrix, got shape {arr.shape}")
        if not np.isfinite(arr).all():
            raise InputError("matrix entries must be finite (no NaN/Inf)")
        max_abs = float(np.max(np.abs(arr)))
        deviation = float(np.max(np.abs(arr - arr.conj().T)))
        if deviation > HERMITICITY_RTOL * max_abs:
            raise InputError(
                f"matrix is not Hermitian: max |X - X*| = {deviation:.3e} "
                f"exceeds {HERMITICITY_RTOL:.0e} * {max_abs:.3e}"
            )
        sym = (arr + arr.conj().T) / 2.0
        sym.flags.writeable = False
        self._arr = sym
        self._digest = None

    @classmethod
    def _wrap_exact(cls, arr: np.ndarray) -> "HermitianMatrix":
        # Internal fast path for arrays already exactly Hermitian
        # (sums, real scalings, and Kronecker products of exactly
        # Hermitian arrays stay exactly Hermitian in IEEE arithmetic).
        obj = cls.__new__(cls)
        a = np.ascontiguousarray(arr, dtype=np.complex128)
        a.flags.writeable = False
        obj._arr = a
        obj._digest = None
        return obj

    @classmethod
    def identity(cls, dim: int) -> "HermitianMatrix":
        return cls._wrap_exact(np.eye(dim, dtype=np.complex128))

    @classmethod
    def diagonal(cls, values) -> "HermitianMatrix":
        vals = np.asarray(values, dtype=np.float64)
        return cls._wrap_exact(np.diag(vals).astype(np.complex128))

    @property
    def dim(self) -> int:
        return self._arr.shape[0]

    @property
    def array(self) -> np.ndarray:
        """The stored entries as a read-only (dim, dim) complex array."""
        return self._arr

    @property
    def digest(self) -> str:
        """Content hash; equal matrices (bitwise) share a digest."""
        if self._digest is None:
            self._digest = array_digest(self._arr)
        return self._digest

    def __add__(self, other: "HermitianMatrix") -> "HermitianMatrix":
        if not isinstance(other, HermitianMatrix):
            return NotImplemented
        return HermitianMatrix._wrap_exact(self._arr + other._arr)

    def __sub__(self, other: "HermitianMatrix") -> "HermitianMatrix":
        if not isinstance(other, HermitianMatrix):
            return NotImplemented
        return HermitianMatrix._wrap_exact(self._arr - other._arr)

    def __mul__(self, scalar) -> "HermitianMatrix":
        s = float(scalar)  # real scalars only; complex would break hermiticity
        return HermitianMatrix._wrap_exact(self._arr * s)

    __rmul__ = __mul__

    def __neg__(self) -> "HermitianMatrix":
        return HermitianMatrix._wrap_exact(-self._arr)

    def __repr__(self) -> str:
        return f"HermitianMatrix(dim={self.dim})"


@dataclass(frozen=True)
class LoewnerCertificate:
    """Numerical verdict of a Loewner-order comparison.

    ``min_eigenvalue`` is the smallest eigenvalue of the (symmetrized)
    difference, ``scale`` its infinity norm, and the verdict is decided
    relative to ``tolerance * max(1, scale)``:

    * EQUALITY: every eigenvalue lies within the band.
    * HOLDS: the smallest eigenvalue is above the negative band edge.
    * FAILS: otherwise.
    """

    min_eigenvalue: float
    scale: float
    tolerance: float
    verdict: Verdict

    @property
    def ok(self) -> bool:
        """True for HOLDS or EQUALITY."""
        return self.verdict is not Verdict.FAILS


@dataclass(frozen=True)
class PdSampleConfig:
    """Parameters of one reproducible positive definite sample."""

    dim: int
    seed: int
    condition_target: float = 10.0
    spectrum_kind: SpectrumKind = SpectrumKind.LOGUNIFORM

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise InputError("dim must be a positive integer")
        if not 0 <= self.seed < 2**64:
            raise InputError("seed must be a 64-bit unsigned integer")
        if not (math.isfinite(self.condition_target) and self.condition_target >= 1.0):
            raise InputError("condition_target must be finite and >= 1")


def _as_array(mat) -> np.ndarray:
    if isinstance(mat, HermitianMatrix):
        return mat.array
    arr = np.asarray(mat, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise InputError(f"expected a nonempty square matrix, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise InputError("matrix entries must be finite (no NaN/Inf)")
    return arr


def check_tensor_budget(dim: int, power: int, max_dim: int = DEFAULT_MAX_TENSOR_DIM) -> int:
    """Return ``dim ** power`` or raise :class:`BudgetError` if it exceeds
    ``max_dim``.  Never truncates."""
    if power < 1:
        raise InputError("tensor power must be >= 1")
    out = dim**power
    if out > max_dim:
        raise BudgetError(
            f"tensor dimension {dim}^{power} = {out} exceeds budget {max_dim}; "
            "raise the limit explicitly if this is intended"
        )
    return out


def kron(a, b, max_dim: int = DEFAULT_MAX_TENSOR_DIM) -> np.ndarray:
    """Kronecker product of two square complex matrices.

    Accepts :class:`HermitianMatrix` or plain arrays; returns a plain
    array (Hermitian inputs yield a Hermitian result).
    """
    aa, bb = _as_array(a), _as_array(b)
    out_dim = aa.shape[0] * bb.shape[0]
    if out_dim > max_dim:
        raise BudgetError(
            f"Kronecker product dimension {aa.shape[0]}*{bb.shape[0]} = {out_dim} "
            f"exceeds budget {max_dim}"
        )
    return np.kron(aa, bb)


def tensor_power(mat: HermitianMatrix, power: int, max_dim: int = DEFAULT_MAX_TENSOR_DIM) -> HermitianMatrix:
    """p-fold left-associated Kronecker power ``mat ⊗ ... ⊗ mat``."""
    if not isinstance(mat, HermitianMatrix):
        mat = HermitianMatrix(mat)
    check_tensor_budget(mat.dim, power, max_dim)
    acc = mat.array
    for _ in range(power - 1):
        acc = np.kron(acc, mat.array)
    return HermitianMatrix._wrap_exact(acc)


def hermitian_eigenvalues(mat: HermitianMatrix) -> np.ndarray:
    """All eigenvalues, ascending.  Deterministic for identical input."""
    if not isinstance(mat, HermitianMatrix):
        mat = HermitianMatrix(mat)
    return np.linalg.eigvalsh(mat.array)


def min_eigenvalue(mat: HermitianMatrix) -> float:
    """Smallest eigenvalue of a Hermitian matrix."""
    return float(hermitian_eigenvalues(mat)[0])


def psd_certificate(mat: HermitianMatrix, tol: float = DEFAULT_LOEWNER_TOL) -> LoewnerCertificate:
    """Certify ``mat >= 0`` in the Loewner order.

    The tolerance is applied relative to ``max(1, scale)`` with scale the
    infinity norm of ``mat``; tensor powers inflate magnitudes, so an
    absolute tolerance would be meaningless.
    """
    if not isinstance(mat, HermitianMatrix):
        mat = HermitianMatrix(mat)
    eigs = np.linalg.eigvalsh(mat.array)
    scale = float(np.linalg.norm(mat.array, np.inf))
    band = tol * max(1.0, scale)
    lo = float(eigs[0])
    if float(np.max(np.abs(eigs))) <= band:
        verdict = Verdict.EQUALITY
    elif lo >= -band:
        verdict = Verdict.HOLDS
    else:
        verdict = Verdict.FAILS
    return LoewnerCertificate(min_eigenvalue=lo, scale=scale, tolerance=tol, verdict=verdict)


def loewner_geq(a: HermitianMatrix, b: HermitianMatrix, tol: float = DEFAULT_LOEWNER_TOL) -> LoewnerCertificate:
    """Certificate for ``a >= b`` (positive semidefiniteness of a - b)."""
    if not isinstance(a, HermitianMatrix):
        a = HermitianMatrix(a)
    if not isinstance(b, HermitianMatrix):
        b = HermitianMatrix(b)
    if a.dim != b.dim:
        raise InputError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return psd_certificate(a - b, tol)


def random_pd(cfg: PdSampleConfig) -> HermitianMatrix:
    """Seeded Hermitian positive definite sample.

    Built as ``Q diag(lam) Q*`` where Q comes from the QR factorization of
    a seeded complex Gaussian matrix (columns rephased so R has a positive
    real diagonal, which makes Q canonical) and ``lam`` is a deterministic
    grid on ``[1, condition_target]``.  Identical configs give
    bit-identical output on the same platform.
    """
    rng = np.random.default_rng(cfg.seed)
    d = cfg.dim
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r).copy()
    diag[diag == 0] = 1.0
    q = q * (diag / np.abs(diag)).conj()
    if cfg.spectrum_kind is SpectrumKind.UNIFORM:
        lam = np.linspace(1.0, cfg.condition_target, d)
    else:
        lam = np.geomspace(1.0, cfg.condition_target, d)
    h = (q * lam) @ q.conj().T
    return HermitianMatrix._wrap_exact((h + h.conj().T) / 2.0)


# ---------------------------------------------------------------------------
# Matrix file format: a JSON text document with an integer "dim" and a
# row-major "entries" list of [re, im] pairs.  Floats are written with 17
# significant digits so the round trip is bit-exact.
# ---------------------------------------------------------------------------


def dump_matrix(mat) -> str:
    arr = _as_array(mat)
    dim = arr.shape[0]
    pairs = ", ".join(
        f"[{format_sig17(v.real)}, {format_sig17(v.imag)}]" for v in arr.ravel()
    )
    return f'{{"dim": {dim}, "entries": [{pairs}]}}\n'


def save_matrix(path: str | os.PathLike, mat) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_matrix(mat))


def parse_matrix(text: str) -> np.ndarray:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"unparseable matrix file: {exc}") from exc
    if not isinstance(doc, dict) or "dim" not in doc or "entries" not in doc:
        raise InputError('matrix file must contain "dim" and "entries" fields')
    dim = doc["dim"]
    entries = doc["entries"]
    if not isinstance(dim, int) or dim < 1:
        raise InputError('"dim" must be a positive integer')
    if not isinstance(entries, list) or len(entries) != dim * dim:
        raise InputError(f'"entries" must hold dim^2 = {dim * dim} [re, im] pairs')
    flat = np.empty(dim * dim, dtype=np.complex128)
    for idx, pair in enumerate(entries):
        if not (isinstance(pair, list) and len(pair) == 2):
            raise InputError(f"entry {idx} is not a [re, im] pair")
        flat[idx] = complex(float(pair[0]), float(pair[1]))
    arr = flat.reshape(dim, dim)
    if not np.isfinite(arr).all():
        raise InputError("matrix entries must be finite (no NaN/Inf)")
    return arr


def load_matrix(path: str | os.PathLike) -> np.ndarray:
    """Read a matrix file as a general complex square array."""
    with open(path, "r", encoding="utf-8") as fh:
        return parse_matrix(fh.read())


def load_hermitian(path: str | os.PathLike) -> HermitianMatrix:
    return HermitianMatrix(load_matrix(path))
