"""The finite Weyl-Heisenberg group H(N) as an exact abstract group.

Elements are stored in the normal form ``tau**l * Q**i * P**j`` with
``tau = -exp(i*pi/N)`` so that ``tau**2 = omega = exp(2*pi*i/N)``.  For odd N
``tau`` already lies in the cyclic group generated by ``omega`` and the phase
exponent is taken mod N; for even N it is taken mod 2N.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator

import numpy as np


@dataclass(frozen=True)
class WHContext:
    dim: int

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError(f"Weyl-Heisenberg dimension must be >= 2, got {self.dim}")

    @property
    def phase_order(self) -> int:
        return self.dim if self.dim % 2 else 2 * self.dim

    def element(self, l: int = 0, i: int = 0, j: int = 0) -> "WHElement":
        return WHElement(self, l % self.phase_order, i % self.dim, j % self.dim)

    def identity(self) -> "WHElement":
        return WHElement(self, 0, 0, 0)

    def elements(self) -> Iterator["WHElement"]:
        for l, i, j in product(range(self.phase_order), range(self.dim), range(self.dim)):
            yield WHElement(self, l, i, j)


@dataclass(frozen=True)
class WHElement:
    ctx: WHContext
    l: int
    i: int
    j: int

    def __post_init__(self):
        if not (0 <= self.l < self.ctx.phase_order and 0 <= self.i < self.ctx.dim
                and 0 <= self.j < self.ctx.dim):
            raise ValueError(f"unreduced exponents {(self.l, self.i, self.j)} for N={self.ctx.dim}")

    def __mul__(self, other: "WHElement") -> "WHElement":
        return wh_mul(self, other)

    def inverse(self) -> "WHElement":
        return wh_inverse(self)

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.l, self.i, self.j)


@dataclass(frozen=True)
class PhasePoint:
    """Coset label (i, j) of Q**i P**j in Z_N x Z_N."""

    dim: int
    i: int
    j: int

    def __post_init__(self):
        object.__setattr__(self, "i", self.i % self.dim)
        object.__setattr__(self, "j", self.j % self.dim)

    def __add__(self, other: "PhasePoint") -> "PhasePoint":
        _check_dim(self.dim, other.dim)
        return PhasePoint(self.dim, self.i + other.i, self.j + other.j)

    def __neg__(self) -> "PhasePoint":
        return PhasePoint(self.dim, -self.i, -self.j)

    def as_tuple(self) -> tuple[int, int]:
        return (self.i, self.j)


def _check_dim(a: int, b: int) -> None:
    if a != b:
        raise ValueError(f"dimension mismatch: {a} vs {b}")


def wh_mul(a: WHElement, b: WHElement) -> WHElement:
    # P^j Q^i' = omega^(j i') Q^i' P^j and omega = tau^2
    if a.ctx != b.ctx:
        raise ValueError(f"context mismatch: N={a.ctx.dim} vs N={b.ctx.dim}")
    ctx = a.ctx
    return WHElement(
        ctx,
        (a.l + b.l + 2 * a.j * b.i) % ctx.phase_order,
        (a.i + b.i) % ctx.dim,
        (a.j + b.j) % ctx.dim,
    )


def wh_inverse(a: WHElement) -> WHElement:
    ctx = a.ctx
    return WHElement(
        ctx,
        (-a.l + 2 * a.i * a.j) % ctx.phase_order,
        -a.i % ctx.dim,
        -a.j % ctx.dim,
    )


def wh_group_order(ctx: WHContext) -> int:
    return ctx.phase_order * ctx.dim**2


def commutes(a: WHElement, b: WHElement) -> bool:
    return wh_mul(a, b) == wh_mul(b, a)


def center(ctx: WHContext) -> list[WHElement]:
    """Center of H(N), found by testing commutation against the whole group."""
    elems = list(ctx.elements())
    return [z for z in elems if all(commutes(z, g) for g in elems)]


def project(a: WHElement) -> PhasePoint:
    return PhasePoint(a.ctx.dim, a.i, a.j)


def symplectic_form(u: PhasePoint, v: PhasePoint) -> int:
    """q((i,j),(i',j')) = i'j - ij' mod N."""
    _check_dim(u.dim, v.dim)
    return (v.i * u.j - u.i * v.j) % u.dim


# dense realization

def root_of_unity(k: int, m: int) -> complex:
    """exp(2*pi*i*k/m) with k reduced mod m first."""
    return complex(np.exp(2j * np.pi * (k % m) / m))


def tau_power(n: int, e: int) -> complex:
    # tau = exp(2 pi i (n+1) / 2n)
    return root_of_unity(e * (n + 1), 2 * n)


def clock(n: int) -> np.ndarray:
    """Q_n = diag(1, w, ..., w^(n-1))."""
    return np.diag([root_of_unity(k, n) for k in range(n)])


def shift(n: int) -> np.ndarray:
    """P_n with P|k> = |k-1 mod n>."""
    return np.roll(np.eye(n, dtype=complex), 1, axis=1)


def clock_power(n: int, e: int) -> np.ndarray:
    return np.diag([root_of_unity(k * e, n) for k in range(n)])


def shift_power(n: int, e: int) -> np.ndarray:
    return np.roll(np.eye(n, dtype=complex), e % n, axis=1)


def to_dense(a: WHElement) -> np.ndarray:
    n = a.ctx.dim
    return tau_power(n, a.l) * clock_power(n, a.i) @ shift_power(n, a.j)
