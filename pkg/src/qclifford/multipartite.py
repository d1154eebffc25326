"""Composite systems H_{n_1} x ... x H_{n_k}: the block-matrix monoid, the
symmetry groups Sp_[n_1,...,n_k] and their elementary-divisor decomposition.

Phase-space coordinates are ordered (P_1, Q_1, ..., P_k, Q_k): coordinate 2i is
the shift exponent and 2i+1 the clock exponent of factor i (0-based).  A block
matrix is stored as a flat 2k x 2k integer array; row r is reduced modulo the
dimension of the factor it belongs to.  Factor indices are 0-based in this
module.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from itertools import product
from math import gcd, prod
from typing import Iterable, Sequence

import numpy as np

from .clifford1 import build_D, build_S
from .dense import ad_action, equal_up_to_phase
from .errors import GuardExceededError, NotInNormalizerError
from .numtheory import elementary_divisor_blocks, sl2_order, sp_order
from .weylheis import clock_power, shift_power

ENUM_GUARD = 2**24
CLOSURE_GUARD = 10**6
DENSE_GUARD = 36


def check_dims(dims: Sequence[int]) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims:
        raise ValueError("dims must be nonempty")
    if any(d < 2 for d in dims):
        raise ValueError(f"every dimension must be >= 2, got {list(dims)}")
    return dims


@lru_cache(maxsize=None)
def row_moduli(dims: tuple[int, ...]) -> np.ndarray:
    out = np.repeat(np.array(dims, dtype=np.int64), 2)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def scale_matrix(dims: tuple[int, ...]) -> np.ndarray:
    """s[r, c] = n_i / gcd(n_i, n_j) for row r in factor i and column c in factor j."""
    m = row_moduli(dims)
    s = m[:, None] // np.gcd(m[:, None], m[None, :])
    s.setflags(write=False)
    return s


def _reduce(arr: np.ndarray, dims: tuple[int, ...]) -> np.ndarray:
    return np.mod(arr, row_moduli(dims)[:, None])


class BlockMatrix:
    """Element of the monoid S_[n_1,...,n_k].

    Block (i, j) is stored reduced mod n_i and must be divisible by
    n_i / gcd(n_i, n_j).
    """

    __slots__ = ("dims", "array")

    def __init__(self, dims: Sequence[int], array, *, check: bool = True):
        dims = check_dims(dims)
        arr = np.asarray(array, dtype=np.int64)
        size = 2 * len(dims)
        if arr.shape != (size, size):
            raise ValueError(f"expected a {size}x{size} array for dims {list(dims)}, got {arr.shape}")
        arr = _reduce(arr, dims)
        if check and np.any(arr % scale_matrix(dims)):
            raise ValueError("block entries violate the n_i/gcd(n_i,n_j) divisibility constraint")
        arr.setflags(write=False)
        self.dims = dims
        self.array = arr

    @classmethod
    def identity(cls, dims: Sequence[int]) -> "BlockMatrix":
        dims = check_dims(dims)
        return cls(dims, np.eye(2 * len(dims), dtype=np.int64))

    @classmethod
    def J(cls, dims: Sequence[int]) -> "BlockMatrix":
        dims = check_dims(dims)
        j2 = np.array([[0, 1], [-1, 0]])
        return cls(dims, np.kron(np.eye(len(dims), dtype=np.int64), j2))

    @classmethod
    def from_blocks(cls, dims: Sequence[int], blocks) -> "BlockMatrix":
        blocks = np.asarray(blocks, dtype=np.int64)
        k = blocks.shape[0]
        return cls(dims, blocks.transpose(0, 2, 1, 3).reshape(2 * k, 2 * k))

    @property
    def k(self) -> int:
        return len(self.dims)

    def block(self, i: int, j: int) -> np.ndarray:
        return self.array[2 * i:2 * i + 2, 2 * j:2 * j + 2]

    def __matmul__(self, other: "BlockMatrix") -> "BlockMatrix":
        return block_mul(self, other)

    def __eq__(self, other) -> bool:
        return (isinstance(other, BlockMatrix) and self.dims == other.dims
                and np.array_equal(self.array, other.array))

    def __hash__(self) -> int:
        return hash((self.dims, self.array.tobytes()))

    def __repr__(self) -> str:
        return f"BlockMatrix(dims={list(self.dims)}, array={self.array.tolist()})"

    def tolist(self) -> list[list[int]]:
        return self.array.tolist()


def _same_dims(h: BlockMatrix, g: BlockMatrix) -> None:
    if h.dims != g.dims:
        raise ValueError(f"dims mismatch: {list(h.dims)} vs {list(g.dims)}")


def block_mul(h: BlockMatrix, g: BlockMatrix) -> BlockMatrix:
    # integer lifts multiplied, then each row reduced by its own modulus; the
    # divisibility constraint makes the choice of lift irrelevant
    _same_dims(h, g)
    return BlockMatrix(h.dims, h.array @ g.array, check=False)


def adjoint_star(h: BlockMatrix) -> BlockMatrix:
    s = scale_matrix(h.dims)
    return BlockMatrix(h.dims, (h.array.T // s.T) * s, check=False)


def _adjoint_batch(arr: np.ndarray, dims: tuple[int, ...]) -> np.ndarray:
    s = scale_matrix(dims)
    return (np.swapaxes(arr, -1, -2) // s.T) * s


def is_symplectic(h: BlockMatrix) -> bool:
    j = BlockMatrix.J(h.dims)
    return block_mul(block_mul(adjoint_star(h), j), h) == j


def symplectic_mask(arr: np.ndarray, dims: tuple[int, ...]) -> np.ndarray:
    """Vectorized is_symplectic over a stack of shape (batch, 2k, 2k)."""
    m = row_moduli(dims)[:, None]
    j = BlockMatrix.J(dims).array
    lhs = np.mod(np.mod(_adjoint_batch(arr, dims) @ j, m) @ arr, m)
    return np.all(lhs == j, axis=(1, 2))


def sp_inverse(h: BlockMatrix) -> BlockMatrix:
    """J^-1 H* J, the inverse of a symplectic H."""
    j = BlockMatrix.J(h.dims)
    minus_j = BlockMatrix(h.dims, -j.array)
    return minus_j @ adjoint_star(h) @ j


@dataclass(frozen=True)
class MultiPhasePoint:
    dims: tuple[int, ...]
    coords: tuple[int, ...]

    def __post_init__(self):
        dims = check_dims(self.dims)
        if len(self.coords) != 2 * len(dims):
            raise ValueError("need two coordinates per factor")
        mods = row_moduli(dims)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "coords", tuple(int(c) % int(q) for c, q in zip(self.coords, mods)))


def act(h: BlockMatrix, v: MultiPhasePoint) -> MultiPhasePoint:
    if h.dims != v.dims:
        raise ValueError("dims mismatch")
    return MultiPhasePoint(v.dims, tuple(h.array @ np.array(v.coords, dtype=np.int64)))


def pairing(u: MultiPhasePoint, v: MultiPhasePoint) -> Fraction:
    """Commutator phase of the two tensor Paulis, as an element of Q/Z.

    Factor i contributes (u_P v_Q - u_Q v_P) / n_i, i.e. u^T J v with each
    factor read in its own modulus.
    """
    total = Fraction(0)
    for i, n in enumerate(u.dims):
        up, uq = u.coords[2 * i:2 * i + 2]
        vp, vq = v.coords[2 * i:2 * i + 2]
        total += Fraction(up * vq - uq * vp, n)
    return total % 1


def all_phase_points(dims: Sequence[int]) -> Iterable[MultiPhasePoint]:
    dims = check_dims(dims)
    for coords in product(*(range(q) for q in row_moduli(dims))):
        yield MultiPhasePoint(dims, coords)


# enumeration

def enumeration_size(dims: Sequence[int]) -> int:
    dims = check_dims(dims)
    m = row_moduli(dims)
    return int(prod(int(x) for x in (m[:, None] // scale_matrix(dims)).ravel()))


def sp_enumerate(dims: Sequence[int], max_candidates: int = ENUM_GUARD,
                 chunk: int = 1 << 16) -> list[BlockMatrix]:
    """Every monoid element satisfying H* J H = J, by exhaustive search."""
    dims = check_dims(dims)
    total = enumeration_size(dims)
    if total > max_candidates:
        raise GuardExceededError(
            f"sp_enumerate({list(dims)}) needs {total} candidates, above the guard {max_candidates}")
    size = 2 * len(dims)
    s = scale_matrix(dims).ravel()
    radix = (row_moduli(dims)[:, None] // scale_matrix(dims)).ravel()
    out = []
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        digits = np.empty((idx.size, size * size), dtype=np.int64)
        rest = idx
        for pos in range(size * size - 1, -1, -1):
            rest, digits[:, pos] = np.divmod(rest, radix[pos])
        cand = (digits * s).reshape(-1, size, size)
        for arr in cand[symplectic_mask(cand, dims)]:
            out.append(BlockMatrix(dims, arr, check=False))
    return out


# dense side

def total_dim(dims: Sequence[int]) -> int:
    return prod(check_dims(dims))


def embed(op: np.ndarray, dims: Sequence[int], factor: int) -> np.ndarray:
    dims = check_dims(dims)
    left = prod(dims[:factor])
    right = prod(dims[factor + 1:])
    return np.kron(np.kron(np.eye(left), op), np.eye(right))


def tensor_wh(dims: Sequence[int], coords: Sequence[int]) -> np.ndarray:
    """(P^x_1 Q^z_1) x ... x (P^x_k Q^z_k) for coords (x_1, z_1, ..., x_k, z_k)."""
    dims = check_dims(dims)
    mats = [shift_power(n, coords[2 * i]) @ clock_power(n, coords[2 * i + 1])
            for i, n in enumerate(dims)]
    return reduce(np.kron, mats)


def pauli_generator(dims: Sequence[int], m: int) -> np.ndarray:
    """A_m (0-based m): even m embeds P, odd m embeds Q of factor m // 2."""
    coords = [0] * (2 * len(dims))
    coords[m] = 1
    return tensor_wh(dims, coords)


def build_R(dims: Sequence[int], i: int, j: int) -> np.ndarray:
    """Coupling unitary: block-diagonal in the digit a of factor i, applying
    Q_{n_j}^(a * n_j / gcd(n_i, n_j)) on factor j."""
    dims = check_dims(dims)
    k = len(dims)
    if not (0 <= i < j < k):
        raise ValueError(f"need 0 <= i < j < {k}, got i={i}, j={j}")
    ni, nj = dims[i], dims[j]
    t = clock_power(nj, nj // gcd(ni, nj))
    between = np.eye(prod(dims[i + 1:j]))
    tij = np.kron(between, t)
    mid = np.zeros((ni * tij.shape[0],) * 2, dtype=complex)
    step = tij.shape[0]
    power = np.eye(step, dtype=complex)
    for a in range(ni):
        mid[a * step:(a + 1) * step, a * step:(a + 1) * step] = power
        power = power @ tij
    return np.kron(np.kron(np.eye(prod(dims[:i])), mid), np.eye(prod(dims[j + 1:])))


def _digits(index: int, dims: tuple[int, ...]) -> list[int]:
    out = []
    for n in reversed(dims):
        index, r = divmod(index, n)
        out.append(r)
    return out[::-1]


def _index(digits: Sequence[int], dims: tuple[int, ...]) -> int:
    idx = 0
    for d, n in zip(digits, dims):
        idx = idx * n + d % n
    return idx


def recognize_tensor_wh(w: np.ndarray, dims: Sequence[int], tol: float | None = None) -> tuple[int, ...]:
    """Exponent vector of the tensor Weyl-Heisenberg element proportional to w.

    A candidate is read off from the monomial pattern of w and then confirmed
    by a full up-to-phase comparison.
    """
    dims = check_dims(dims)
    n_total = prod(dims)
    if w.shape != (n_total, n_total):
        raise ValueError(f"expected a {n_total}x{n_total} matrix, got {w.shape}")
    r0 = int(np.argmax(np.abs(w[:, 0])))
    ref = w[r0, 0]
    if abs(ref) < 0.5:
        raise NotInNormalizerError("not in Weyl-Heisenberg group")
    shifts = [-d for d in _digits(r0, dims)]
    coords = []
    for i, n in enumerate(dims):
        src = [0] * len(dims)
        src[i] = 1
        dst = [-x for x in shifts]
        dst[i] += 1
        ratio = w[_index(dst, dims), _index(src, dims)] / ref
        z = int(round(np.angle(ratio) * n / (2 * np.pi))) % n
        coords += [shifts[i] % n, z]
    if not equal_up_to_phase(w, tensor_wh(dims, coords), tol):
        raise NotInNormalizerError("not in Weyl-Heisenberg group")
    return tuple(coords)


def extract_block_matrix(x: np.ndarray, dims: Sequence[int], tol: float | None = None) -> BlockMatrix:
    dims = check_dims(dims)
    cols = [recognize_tensor_wh(ad_action(x, pauli_generator(dims, m)), dims, tol)
            for m in range(2 * len(dims))]
    return BlockMatrix(dims, np.array(cols, dtype=np.int64).T)


def normalizer_generators(dims: Sequence[int]) -> list[tuple[str, np.ndarray]]:
    """Local Fourier and phase gates on every factor plus every coupling R_ij.

    Names use 1-based factor numbers.
    """
    dims = check_dims(dims)
    gens = []
    for i, n in enumerate(dims):
        gens.append((f"S[{i + 1}]", embed(build_S(n), dims, i)))
        gens.append((f"D[{i + 1}]", embed(build_D(n), dims, i)))
    for i in range(len(dims)):
        for j in range(i + 1, len(dims)):
            gens.append((f"R[{i + 1},{j + 1}]", build_R(dims, i, j)))
    return gens


def verify_normalizer_generators(dims: Sequence[int], tol: float | None = None) -> list[dict]:
    """Conjugate every A_m by every generator and try to recognize the result."""
    dims = check_dims(dims)
    if prod(dims) > DENSE_GUARD:
        raise GuardExceededError(f"total dimension {prod(dims)} exceeds the dense guard {DENSE_GUARD}")
    report = []
    for name, g in normalizer_generators(dims):
        for m in range(2 * len(dims)):
            entry = {"generator": name, "A_m": m + 1, "image": None, "pass": False}
            try:
                entry["image"] = list(recognize_tensor_wh(ad_action(g, pauli_generator(dims, m)), dims, tol))
                entry["pass"] = True
            except NotInNormalizerError:
                pass
            report.append(entry)
    return report


# closure

def closure_arrays(generators: Sequence[np.ndarray], dims: tuple[int, ...],
                   max_size: int = CLOSURE_GUARD) -> list[np.ndarray]:
    """Breadth-first closure of block matrices under left multiplication."""
    m = row_moduli(dims)[:, None]
    ident = np.eye(2 * len(dims), dtype=np.int64)
    seen = {ident.tobytes()}
    elements = [ident]
    frontier = [ident]
    gens = [np.asarray(g, dtype=np.int64) for g in generators]
    while frontier:
        stack = np.stack(frontier)
        frontier = []
        for g in gens:
            for arr in np.mod(g @ stack, m):
                key = arr.tobytes()
                if key in seen:
                    continue
                seen.add(key)
                elements.append(arr)
                frontier.append(arr)
                if len(seen) > max_size:
                    raise GuardExceededError(f"closure exceeded {max_size} elements")
    return elements


def generator_images(dims: Sequence[int]) -> list[BlockMatrix]:
    return [extract_block_matrix(g, dims) for _, g in normalizer_generators(dims)]


def sp_closure(dims: Sequence[int], max_size: int = CLOSURE_GUARD) -> int:
    """Order of the group generated by the images of the local and coupling gates."""
    dims = check_dims(dims)
    gens = [h.array for h in generator_images(dims)]
    return len(closure_arrays(gens, dims, max_size))


# elementary divisor decomposition

@dataclass(frozen=True)
class SymmetryFactor:
    kind: str  # "SL2", "Sp2k" or "SpMixed"
    prime: int
    moduli: tuple[int, ...] = field(default=())

    def label(self) -> str:
        if self.kind == "SL2":
            return f"SL(2,Z_{self.moduli[0]})"
        if self.kind == "Sp2k":
            return f"Sp({2 * len(self.moduli)},Z_{self.moduli[0]})"
        return "Sp_[" + ",".join(str(q) for q in self.moduli) + "]"

    def dims(self) -> tuple[int, ...]:
        return self.moduli

    def known_order(self) -> int | None:
        """Closed-form order where one is available (not for mixed powers)."""
        if self.kind == "SL2":
            return sl2_order(self.moduli[0])
        if self.kind == "Sp2k":
            return sp_order(len(self.moduli), self.moduli[0])
        return None

    def as_dict(self) -> dict:
        return {"kind": self.kind, "prime": self.prime, "moduli": list(self.moduli), "label": self.label()}


def decompose_symmetry(dims: Sequence[int]) -> list[SymmetryFactor]:
    dims = check_dims(dims)
    out = []
    for block in elementary_divisor_blocks(dims):
        local = tuple(sorted(block.local_dims))
        if len(local) == 1:
            out.append(SymmetryFactor("SL2", block.prime, local))
        elif len(set(local)) == 1:
            out.append(SymmetryFactor("Sp2k", block.prime, local))
        else:
            out.append(SymmetryFactor("SpMixed", block.prime, local))
    return out


def format_decomposition(factors: Sequence[SymmetryFactor]) -> str:
    return " x ".join(f.label() for f in factors)
