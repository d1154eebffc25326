"""Single-system Clifford structure: SL(2, Z_N), the quotient group
(Z_N x Z_N) x| SL(2, Z_N), the S_N / D_N generators and word lifting."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import reduce
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .errors import GuardExceededError, UnreachableError
from .weylheis import PhasePoint, root_of_unity, tau_power

SL2_ENUM_MAX = 12
CLOSURE_GUARD = 10_000

LETTERS = ("S", "S^-1", "D", "D^-1")


@dataclass(frozen=True)
class SL2Mat:
    """[[a, c], [b, d]] over Z_n with unit determinant.

    Columns are the images of the Q and P coset labels respectively.
    """

    n: int
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        n = self.n
        for f in "abcd":
            object.__setattr__(self, f, getattr(self, f) % n)
        if (self.a * self.d - self.b * self.c) % n != 1 % n:
            raise ValueError(f"determinant of {self.rows()} is not 1 mod {n}")

    def rows(self) -> list[list[int]]:
        return [[self.a, self.c], [self.b, self.d]]

    def __matmul__(self, other: "SL2Mat") -> "SL2Mat":
        return sl2_mul(self, other)

    @classmethod
    def identity(cls, n: int) -> "SL2Mat":
        return cls(n, 1, 0, 0, 1)

    @classmethod
    def from_rows(cls, n: int, rows: Sequence[Sequence[int]]) -> "SL2Mat":
        (a, c), (b, d) = rows
        return cls(n, a, b, c, d)


def phi_S(n: int) -> SL2Mat:
    return SL2Mat.from_rows(n, [[0, 1], [-1, 0]])


def phi_D(n: int) -> SL2Mat:
    return SL2Mat.from_rows(n, [[1, 1], [0, 1]])


def _check_mod(x: int, y: int) -> None:
    if x != y:
        raise ValueError(f"modulus mismatch: {x} vs {y}")


def sl2_mul(x: SL2Mat, y: SL2Mat) -> SL2Mat:
    _check_mod(x.n, y.n)
    return SL2Mat(
        x.n,
        x.a * y.a + x.c * y.b,
        x.b * y.a + x.d * y.b,
        x.a * y.c + x.c * y.d,
        x.b * y.c + x.d * y.d,
    )


def sl2_inverse(m: SL2Mat) -> SL2Mat:
    return SL2Mat(m.n, m.d, -m.b, -m.c, m.a)


def sl2_act(m: SL2Mat, p: PhasePoint) -> PhasePoint:
    _check_mod(m.n, p.dim)
    return PhasePoint(m.n, m.a * p.i + m.c * p.j, m.b * p.i + m.d * p.j)


def sl2_enumerate(n: int) -> list[SL2Mat]:
    if n < 2:
        raise ValueError(f"SL(2, Z_n) needs n >= 2, got {n}")
    if n > SL2_ENUM_MAX:
        raise GuardExceededError(
            f"sl2_enumerate is limited to n <= {SL2_ENUM_MAX} (got {n}); n^4 candidates grow fast"
        )
    return [
        SL2Mat(n, a, b, c, d)
        for a, b, c, d in product(range(n), repeat=4)
        if (a * d - b * c) % n == 1 % n
    ]


@dataclass(frozen=True)
class CliffordElem:
    """Element (t, M) of (Z_N x Z_N) x| SL(2, Z_N).

    Composition uses the left action: (t1, M1)(t2, M2) = (t1 + M1 t2, M1 M2).
    """

    n: int
    t: PhasePoint
    m: SL2Mat

    def __mul__(self, other: "CliffordElem") -> "CliffordElem":
        return clifford_mul(self, other)

    @classmethod
    def identity(cls, n: int) -> "CliffordElem":
        return cls(n, PhasePoint(n, 0, 0), SL2Mat.identity(n))


def clifford_mul(x: CliffordElem, y: CliffordElem) -> CliffordElem:
    _check_mod(x.n, y.n)
    return CliffordElem(x.n, x.t + sl2_act(x.m, y.t), sl2_mul(x.m, y.m))


def clifford_inverse(x: CliffordElem) -> CliffordElem:
    inv = sl2_inverse(x.m)
    return CliffordElem(x.n, -sl2_act(inv, x.t), inv)


def clifford_enumerate(n: int) -> list[CliffordElem]:
    return [
        CliffordElem(n, PhasePoint(n, i, j), m)
        for m in sl2_enumerate(n)
        for i, j in product(range(n), repeat=2)
    ]


# dense generators

def build_S(n: int) -> np.ndarray:
    """Fourier matrix with entries w^(-jk)/sqrt(n).

    The sign of the exponent makes S Q S^-1 = P^-1 and S P S^-1 = Q hold for
    the clock/shift convention used here.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    jk = np.outer(np.arange(n), np.arange(n))
    return np.exp(-2j * np.pi * (jk % n) / n) / np.sqrt(n)


def build_D(n: int) -> np.ndarray:
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if n % 2:
        exps = [j * (1 - j) for j in range(n)]
    else:
        exps = [j * (n - j) for j in range(n)]
    return np.diag([tau_power(n, e) for e in exps])


def alpha(n: int) -> complex:
    """Prefactor in D P D^-1 = alpha Q P."""
    return 1.0 + 0j if n % 2 else tau_power(n, n + 1)


def eta() -> complex:
    return root_of_unity(1, 8)


# words in S, D

def letter_image(letter: str, n: int) -> SL2Mat:
    return {
        "S": phi_S(n),
        "S^-1": sl2_inverse(phi_S(n)),
        "D": phi_D(n),
        "D^-1": sl2_inverse(phi_D(n)),
    }[letter]


def letter_dense(letter: str, n: int) -> np.ndarray:
    base = build_S(n) if letter[0] == "S" else build_D(n)
    return base.conj().T if letter.endswith("^-1") else base


def evaluate_word(word: Sequence[str], n: int) -> SL2Mat:
    return reduce(sl2_mul, (letter_image(x, n) for x in word), SL2Mat.identity(n))


def word_to_dense(word: Sequence[str], n: int) -> np.ndarray:
    return reduce(np.matmul, (letter_dense(x, n) for x in word), np.eye(n, dtype=complex))


def sl2_bfs(n: int) -> dict[SL2Mat, tuple[str, ...]]:
    """Shortest words for every reachable matrix, ties broken lexicographically
    in the letter order S < S^-1 < D < D^-1."""
    images = [letter_image(x, n) for x in LETTERS]
    start = SL2Mat.identity(n)
    words = {start: ()}
    queue = deque([start])
    while queue:
        m = queue.popleft()
        w = words[m]
        for letter, g in zip(LETTERS, images):
            nxt = sl2_mul(m, g)
            if nxt not in words:
                words[nxt] = w + (letter,)
                queue.append(nxt)
    return words


_BFS_CACHE: dict[int, dict[SL2Mat, tuple[str, ...]]] = {}


def lift_sl2(m: SL2Mat) -> tuple[str, ...]:
    n = m.n
    if n > SL2_ENUM_MAX:
        raise GuardExceededError(f"lift_sl2 is limited to n <= {SL2_ENUM_MAX} (got {n})")
    if n not in _BFS_CACHE:
        _BFS_CACHE[n] = sl2_bfs(n)
    try:
        return _BFS_CACHE[n][m]
    except KeyError:
        raise UnreachableError(f"{m.rows()} not reached from S, D over Z_{n}") from None


# finite closure of dense generators

def _matrix_key(m: np.ndarray, scale: float = 1e6) -> bytes:
    return np.rint(np.concatenate([m.real.ravel(), m.imag.ravel()]) * scale).astype(np.int64).tobytes()


def finite_closure(generators: Iterable[np.ndarray], max_size: int = CLOSURE_GUARD) -> list[np.ndarray]:
    """All products of the generators, compared entrywise (no phase quotient)."""
    gens = [np.asarray(g, dtype=complex) for g in generators]
    if not gens:
        raise ValueError("need at least one generator")
    n = gens[0].shape[0]
    if any(g.shape != (n, n) for g in gens):
        raise ValueError("generators must share one square shape")
    seen: dict[bytes, np.ndarray] = {}
    queue = deque()
    for g in gens:
        k = _matrix_key(g)
        if k not in seen:
            seen[k] = g
            queue.append(g)
    while queue:
        x = queue.popleft()
        for g in gens:
            y = x @ g
            k = _matrix_key(y)
            if k in seen:
                continue
            seen[k] = y
            queue.append(y)
            if len(seen) > max_size:
                raise GuardExceededError(f"closure exceeded {max_size} elements")
    return list(seen.values())


def contains(elements: Sequence[np.ndarray], x: np.ndarray, up_to_phase: bool = False) -> bool:
    from .dense import allclose, equal_up_to_phase

    test = equal_up_to_phase if up_to_phase else allclose
    return any(test(e, x) for e in elements)


def generates_up_to_phase(generators: Sequence[np.ndarray], targets: Sequence[np.ndarray],
                          max_size: int = CLOSURE_GUARD) -> bool:
    """Search the closure of ``generators`` until every target has been met up
    to a global phase.  Returns False if the closure is exhausted first."""
    from .dense import equal_up_to_phase

    gens = [np.asarray(g, dtype=complex) for g in generators]
    missing = list(targets)
    seen = set()
    queue = deque()

    def visit(y):
        k = _matrix_key(y)
        if k in seen:
            return
        seen.add(k)
        if len(seen) > max_size:
            raise GuardExceededError(f"closure exceeded {max_size} elements")
        queue.append(y)
        missing[:] = [t for t in missing if not equal_up_to_phase(y, t)]

    for g in gens:
        visit(g)
    while queue and missing:
        x = queue.popleft()
        for g in gens:
            visit(x @ g)
    return not missing
