"""Heisenberg-picture simulation of qudit Clifford circuits at coset level.

The simulator tracks only the symplectic action of a circuit on phase-space
labels (no phase column).  Gate representations are taken from the dense
oracle wherever it is affordable and produced analytically otherwise; the two
paths are required to agree.
"""
from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd, prod
from typing import Sequence

import numpy as np

from .clifford1 import build_D, build_S
from .errors import GuardExceededError
from .multipartite import (
    DENSE_GUARD,
    BlockMatrix,
    build_R,
    check_dims,
    embed,
    extract_block_matrix,
    is_symplectic,
    row_moduli,
)
from .weylheis import clock_power, shift_power

FOURIER = "FOURIER"
PHASE = "PHASE"
PAULI_X = "PAULI_X"
PAULI_Z = "PAULI_Z"
COUPLE = "COUPLE"
COUPLE_INV = "COUPLE_INV"

KINDS = (FOURIER, PHASE, PAULI_X, PAULI_Z, COUPLE, COUPLE_INV)
_JSON_KIND = {FOURIER: "FOURIER", PHASE: "PHASE", PAULI_X: "X", PAULI_Z: "Z",
              COUPLE: "COUPLE", COUPLE_INV: "COUPLE_INV"}
_KIND_FROM_JSON = {v: k for k, v in _JSON_KIND.items()} | {k: k for k in KINDS}


@dataclass(frozen=True)
class Gate:
    """One circuit gate.  ``target`` and ``control`` are 0-based factor indices."""

    kind: str
    target: int
    control: int | None = None
    power: int = 1

    def validate(self, dims: Sequence[int]) -> None:
        k = len(dims)
        if self.kind not in KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if not 0 <= self.target < k:
            raise ValueError(f"target {self.target} out of range for {k} factors")
        if self.kind in (COUPLE, COUPLE_INV):
            if self.control is None or not 0 <= self.control < self.target:
                raise ValueError(f"{self.kind} needs 0 <= control < target, got control={self.control}, "
                                 f"target={self.target}")
        elif self.control is not None:
            raise ValueError(f"{self.kind} takes no control factor")


@dataclass(frozen=True)
class Circuit:
    dims: tuple[int, ...]
    gates: tuple[Gate, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "dims", check_dims(self.dims))
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            g.validate(self.dims)

    def __add__(self, other: "Circuit") -> "Circuit":
        if self.dims != other.dims:
            raise ValueError("cannot concatenate circuits on different dims")
        return Circuit(self.dims, self.gates + other.gates)


@dataclass
class Tableau:
    dims: tuple[int, ...]
    matrix: BlockMatrix

    def digest(self) -> str:
        return hashlib.sha256(self.matrix.array.astype(np.int64).tobytes()).hexdigest()


# gate representations

def analytic_local_block(kind: str, n: int) -> np.ndarray:
    """2x2 action on (P, Q) coordinates of one factor."""
    if kind == FOURIER:
        # P -> Q, Q -> P^-1
        return np.array([[0, -1], [1, 0]]) % n
    if kind == PHASE:
        # P -> QP, Q -> Q
        return np.array([[1, 0], [1, 1]]) % n
    if kind in (PAULI_X, PAULI_Z):
        return np.eye(2, dtype=np.int64)
    raise ValueError(f"{kind} is not a single-factor gate")


def analytic_couple_block(ni: int, nj: int, inverse: bool = False) -> np.ndarray:
    """4x4 action of the coupling gate on (P_i, Q_i, P_j, Q_j)."""
    g = gcd(ni, nj)
    sign = 1 if inverse else -1
    h = np.eye(4, dtype=np.int64)
    h[3, 0] = sign * (nj // g)  # P_i -> P_i Q_j^(-n_j/g)
    h[1, 2] = sign * (ni // g)  # P_j -> Q_i^(-n_i/g) P_j
    return h % np.repeat([ni, nj], 2)[:, None]


def local_dense(kind: str, n: int, power: int = 1) -> np.ndarray:
    if kind == FOURIER:
        return build_S(n)
    if kind == PHASE:
        return build_D(n)
    if kind == PAULI_X:
        return shift_power(n, power)
    if kind == PAULI_Z:
        return clock_power(n, power)
    raise ValueError(f"{kind} is not a single-factor gate")


@lru_cache(maxsize=None)
def _local_block(kind: str, n: int) -> np.ndarray:
    if n <= DENSE_GUARD:
        block = extract_block_matrix(local_dense(kind, n), (n,)).array
    else:
        block = analytic_local_block(kind, n)
    block = np.array(block)
    block.setflags(write=False)
    return block


@lru_cache(maxsize=None)
def _couple_block(ni: int, nj: int, inverse: bool) -> np.ndarray:
    if ni * nj <= DENSE_GUARD:
        r = build_R((ni, nj), 0, 1)
        block = extract_block_matrix(r.conj().T if inverse else r, (ni, nj)).array
    else:
        block = analytic_couple_block(ni, nj, inverse)
    block = np.array(block)
    block.setflags(write=False)
    return block


def _sparse_rep(g: Gate, dims: tuple[int, ...]) -> tuple[np.ndarray, np.ndarray]:
    """Row indices touched by the gate and the square block acting on them."""
    t = g.target
    if g.kind in (COUPLE, COUPLE_INV):
        c = g.control
        rows = np.array([2 * c, 2 * c + 1, 2 * t, 2 * t + 1])
        return rows, _couple_block(dims[c], dims[t], g.kind == COUPLE_INV)
    return np.array([2 * t, 2 * t + 1]), _local_block(g.kind, dims[t])


def gate_rep(g: Gate, dims: Sequence[int]) -> BlockMatrix:
    dims = check_dims(dims)
    g.validate(dims)
    rows, block = _sparse_rep(g, dims)
    arr = np.eye(2 * len(dims), dtype=np.int64)
    arr[np.ix_(rows, rows)] = block
    return BlockMatrix(dims, arr)


def gate_dense(g: Gate, dims: Sequence[int]) -> np.ndarray:
    dims = check_dims(dims)
    if g.kind in (COUPLE, COUPLE_INV):
        r = build_R(dims, g.control, g.target)
        return r.conj().T if g.kind == COUPLE_INV else r
    return embed(local_dense(g.kind, dims[g.target], g.power), dims, g.target)


# simulation

def simulate(c: Circuit, check_each: bool = False) -> Tableau:
    """Accumulate gate actions, later gates multiplying on the left."""
    dims = c.dims
    mods = row_moduli(dims)
    arr = np.eye(2 * len(dims), dtype=np.int64)
    for g in c.gates:
        rows, block = _sparse_rep(g, dims)
        arr[rows] = np.mod(block @ arr[rows], mods[rows, None])
        if check_each and not is_symplectic(BlockMatrix(dims, arr, check=False)):
            raise AssertionError(f"tableau lost symplecticity after {g}")
    return Tableau(dims, BlockMatrix(dims, arr, check=False))


def circuit_unitary(c: Circuit) -> np.ndarray:
    n = prod(c.dims)
    if n > DENSE_GUARD:
        raise GuardExceededError(f"total dimension {n} exceeds the dense guard {DENSE_GUARD}")
    u = np.eye(n, dtype=complex)
    for g in c.gates:
        u = gate_dense(g, c.dims) @ u
    return u


def first_difference(a: BlockMatrix, b: BlockMatrix) -> tuple[int, int] | None:
    """0-based (i, j) of the first differing 2x2 block, or None."""
    for i in range(a.k):
        for j in range(a.k):
            if not np.array_equal(a.block(i, j), b.block(i, j)):
                return (i, j)
    return None


def verify_vs_dense(c: Circuit, tol: float | None = None) -> dict:
    simulated = simulate(c).matrix
    extracted = extract_block_matrix(circuit_unitary(c), c.dims, tol)
    diff = first_difference(simulated, extracted)
    return {
        "match": diff is None,
        "simulated": simulated.tolist(),
        "extracted": extracted.tolist(),
        "first_difference": None if diff is None else [diff[0] + 1, diff[1] + 1],
    }


def random_circuit(dims: Sequence[int], n_gates: int, rng: np.random.Generator | int | None = None,
                   kinds: Sequence[str] = KINDS) -> Circuit:
    dims = check_dims(dims)
    rng = np.random.default_rng(rng)
    k = len(dims)
    kinds = [x for x in kinds if k > 1 or x not in (COUPLE, COUPLE_INV)]
    gates = []
    for _ in range(n_gates):
        kind = kinds[rng.integers(len(kinds))]
        if kind in (COUPLE, COUPLE_INV):
            c, t = sorted(rng.choice(k, size=2, replace=False).tolist())
            gates.append(Gate(kind, t, c))
        elif kind in (PAULI_X, PAULI_Z):
            t = int(rng.integers(k))
            gates.append(Gate(kind, t, power=int(rng.integers(1, dims[t]))))
        else:
            gates.append(Gate(kind, int(rng.integers(k))))
    return Circuit(dims, gates)


def benchmark(dims: Sequence[int], gate_count: int, seed: int = 0) -> dict:
    circuit = random_circuit(dims, gate_count, seed)
    for g in circuit.gates:  # warm the gate-rep caches outside the timed region
        _sparse_rep(g, circuit.dims)
    start = time.perf_counter()
    tab = simulate(circuit)
    elapsed = time.perf_counter() - start
    return {
        "dims": list(circuit.dims),
        "gates": gate_count,
        "seed": seed,
        "seconds": elapsed,
        "seconds_per_gate": elapsed / gate_count if gate_count else 0.0,
        "tableau_sha256": tab.digest(),
        "symplectic": is_symplectic(tab.matrix),
    }


# circuit JSON (1-based factor indices)

def circuit_from_dict(data: dict) -> Circuit:
    if not isinstance(data, dict) or "dims" not in data:
        raise ValueError("circuit JSON must be an object with a 'dims' field")
    gates = []
    for pos, raw in enumerate(data.get("gates", [])):
        try:
            kind = _KIND_FROM_JSON[raw["kind"]]
        except KeyError:
            raise ValueError(f"gate {pos}: unknown or missing kind {raw.get('kind')!r}") from None
        if "target" not in raw:
            raise ValueError(f"gate {pos}: missing target")
        control = raw.get("control")
        gates.append(Gate(
            kind,
            int(raw["target"]) - 1,
            None if control is None else int(control) - 1,
            int(raw.get("power", 1)),
        ))
    return Circuit(tuple(data["dims"]), gates)


def circuit_to_dict(c: Circuit) -> dict:
    out = []
    for g in c.gates:
        d = {"kind": _JSON_KIND[g.kind], "target": g.target + 1}
        if g.control is not None:
            d["control"] = g.control + 1
        if g.kind in (PAULI_X, PAULI_Z):
            d["power"] = g.power
        out.append(d)
    return {"dims": list(c.dims), "gates": out}


def load_circuit(text: str) -> Circuit:
    """Parse circuit JSON; malformed JSON raises ``json.JSONDecodeError``."""
    return circuit_from_dict(json.loads(text))


def tableau_to_dict(t: Tableau) -> dict:
    return {"dims": list(t.dims), "matrix": t.matrix.tolist(), "sha256": t.digest()}
