"""Dense complex-matrix oracle for conjugation checks.

Unitaries are plain ``numpy`` complex arrays.  Comparisons use a tolerance that
scales with the matrix dimension: ``tol = base * dim`` with ``base = 1e-9`` by
default, overridable through the ``QC_TOL`` environment variable or
:func:`set_tolerance_base`.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import DeterminantError, NotInNormalizerError
from .weylheis import PhasePoint, WHContext, clock, clock_power, shift, shift_power

_TOL_BASE = float(os.environ.get("QC_TOL", "1e-9"))


def set_tolerance_base(base: float) -> None:
    global _TOL_BASE
    if base <= 0:
        raise ValueError("tolerance must be positive")
    _TOL_BASE = float(base)


def tolerance_base() -> float:
    return _TOL_BASE


def default_tol(dim: int) -> float:
    return _TOL_BASE * dim


@dataclass(frozen=True)
class PhaseMatch:
    matched: bool
    phase: complex | None = None

    def __bool__(self) -> bool:
        return self.matched


def _square_dim(a: np.ndarray) -> int:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a.shape[0]


def is_unitary(u: np.ndarray, tol: float | None = None) -> bool:
    n = _square_dim(u)
    tol = default_tol(n) if tol is None else tol
    return bool(np.max(np.abs(u @ u.conj().T - np.eye(n))) <= tol)


def equal_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float | None = None) -> PhaseMatch:
    """Decide whether ``a == phase * b`` for a unit scalar ``phase``.

    The phase is read off the first entry of ``b`` (row-major) whose modulus
    exceeds ``1 / (2 sqrt(N))``.
    """
    n = _square_dim(a)
    if b.shape != a.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    tol = default_tol(n) if tol is None else tol
    flat_b = b.ravel()
    big = np.flatnonzero(np.abs(flat_b) > 1 / (2 * np.sqrt(n)))
    if big.size == 0:
        return PhaseMatch(False)
    k = big[0]
    phase = a.ravel()[k] / flat_b[k]
    if abs(abs(phase) - 1) > tol:
        return PhaseMatch(False)
    if np.max(np.abs(a - phase * b)) > tol:
        return PhaseMatch(False)
    return PhaseMatch(True, complex(phase))


def allclose(a: np.ndarray, b: np.ndarray, tol: float | None = None) -> bool:
    tol = default_tol(a.shape[0]) if tol is None else tol
    return a.shape == b.shape and bool(np.max(np.abs(a - b)) <= tol)


def ad_action(x: np.ndarray, a: np.ndarray) -> np.ndarray:
    """X A X^dagger."""
    if x.shape != a.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {a.shape}")
    return x @ a @ x.conj().T


def extract_wh_coset(w: np.ndarray, ctx: WHContext, tol: float | None = None) -> PhasePoint:
    """Coset label (i, j) with ``w`` proportional to Q^i P^j, by exhaustive scan."""
    n = ctx.dim
    if w.shape != (n, n):
        raise ValueError(f"expected a {n}x{n} matrix, got {w.shape}")
    for i, j in product(range(n), repeat=2):
        if equal_up_to_phase(w, clock_power(n, i) @ shift_power(n, j), tol):
            return PhasePoint(n, i, j)
    raise NotInNormalizerError("not in Weyl-Heisenberg group")


def phi_of(x: np.ndarray, ctx: WHContext, tol: float | None = None):
    """SL(2, Z_N) image of a normalizer element, [[a, c], [b, d]] layout."""
    from .clifford1 import SL2Mat

    n = ctx.dim
    a, b = extract_wh_coset(ad_action(x, clock(n)), ctx, tol).as_tuple()
    c, d = extract_wh_coset(ad_action(x, shift(n)), ctx, tol).as_tuple()
    if (a * d - b * c) % n != 1 % n:
        raise DeterminantError(f"extracted matrix {[[a, c], [b, d]]} has determinant != 1 mod {n}")
    return SL2Mat(n, a, b, c, d)
