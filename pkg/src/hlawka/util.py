"""Small shared helpers: seed derivation, digests, number formatting."""

from __future__ import annotations

import hashlib

import numpy as np

_MASK64 = (1 << 64) - 1
_SPLITMIX_GAMMA = 0x9E3779B97F4A7C15


def splitmix64(state: int) -> int:
    """One finalization round of the splitmix64 generator."""
    z = (state + _SPLITMIX_GAMMA) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_seed(master_seed: int, index: int) -> int:
    """Deterministic per-trial seed from a master seed and a trial index.

    Independent of how many other indices are drawn, so parallel trial
    execution cannot change the streams.
    """
    if not 0 <= master_seed <= _MASK64:
        raise ValueError("master seed must fit in 64 bits")
    if index < 0:
        raise ValueError("index must be nonnegative")
    return splitmix64((master_seed + (index + 1) * _SPLITMIX_GAMMA) & _MASK64)


def array_digest(arr: np.ndarray) -> str:
    """SHA-256 hex digest of an array's shape and C-order complex bytes."""
    a = np.ascontiguousarray(arr, dtype=np.complex128)
    h = hashlib.sha256()
    h.update(str(a.shape).encode())
    h.update(a.tobytes())
    return h.hexdigest()


def format_sig17(x: float) -> str:
    """Decimal with 17 significant digits; round-trips any double exactly."""
    return format(float(x), ".17g")


def format_complex_sig17(z: complex) -> str:
    z = complex(z)
    if z.imag == 0.0:
        return format_sig17(z.real)
    sign = "+" if z.imag >= 0 else "-"
    return f"{format_sig17(z.real)}{sign}{format_sig17(abs(z.imag))}i"
