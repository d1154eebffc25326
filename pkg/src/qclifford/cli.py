"""Command-line entry point.

Every command builds a report with a list of checks; the exit status is 0 when
all checks pass, 1 when any fails and 2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import datetime
import json
import os
import sys
from itertools import product
from math import prod
from typing import Sequence

import numpy as np

from . import __version__
from . import clifford1 as c1
from . import dense
from . import multipartite as mp
from . import stabsim
from .errors import GuardExceededError, NotInNormalizerError
from .numtheory import sl2_order, sp_order
from .weylheis import (
    PhasePoint,
    WHContext,
    center,
    clock,
    shift,
    symplectic_form,
    to_dense,
    wh_group_order,
    wh_inverse,
    wh_mul,
)

# (|P_N|, |SL(2,Z_N)|, |P_N x| SL(2,Z_N)|) for N = 2..8
REFERENCE_ORDERS = {
    2: (4, 6, 24),
    3: (9, 24, 216),
    4: (16, 48, 768),
    5: (25, 120, 3000),
    6: (36, 144, 5184),
    7: (49, 336, 16464),
    8: (64, 384, 24576),
}


class UsageError(Exception):
    pass


class Report:
    def __init__(self, command: str, inputs: dict):
        self.command = command
        self.inputs = inputs
        self.results: dict = {}
        self.checks: list[dict] = []

    def check(self, name: str, expected, actual) -> bool:
        passed = _plain(expected) == _plain(actual)
        self.checks.append({"name": name, "expected": expected, "actual": actual, "pass": passed})
        return passed

    @property
    def ok(self) -> bool:
        return all(c["pass"] for c in self.checks)

    def as_dict(self) -> dict:
        return _plain({
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "checks": self.checks,
            "version": __version__,
        })


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    return x


# commands

def cmd_orders(max_n: int) -> Report:
    if not 2 <= max_n <= c1.SL2_ENUM_MAX:
        raise UsageError(f"--max must lie in [2, {c1.SL2_ENUM_MAX}], got {max_n}")
    rep = Report("orders", {"max": max_n})
    rows = []
    for n in range(2, max_n + 1):
        formula = sl2_order(n)
        enumerated = len(c1.sl2_enumerate(n))
        row = {"N": n, "phase_space": n * n, "sl2_formula": formula,
               "sl2_enumerated": enumerated, "semidirect": n * n * enumerated}
        rows.append(row)
        rep.check(f"N={n}: |SL(2,Z_N)| enumeration = formula", formula, enumerated)
        if n in REFERENCE_ORDERS:
            rep.check(f"N={n}: table row", list(REFERENCE_ORDERS[n]),
                      [row["phase_space"], enumerated, row["semidirect"]])
    rep.results["rows"] = rows
    return rep


def _count_distinct(mats: Sequence[np.ndarray], tol: float) -> int:
    flat = np.stack([m.ravel() for m in mats])
    distinct = 0
    taken = np.zeros(len(mats), dtype=bool)
    for a in range(len(mats)):
        if taken[a]:
            continue
        distinct += 1
        close = np.max(np.abs(flat - flat[a]), axis=1) <= tol
        taken |= close
    return distinct


def _random_word(rng, n: int, length: int) -> np.ndarray:
    pool = [c1.build_S(n), c1.build_D(n), clock(n), shift(n)]
    out = np.eye(n, dtype=complex)
    for idx in rng.integers(len(pool), size=length):
        out = out @ pool[idx]
    return out


def verify_single(n: int, seed: int = 0, max_closure: int = mp.CLOSURE_GUARD) -> Report:
    if not 2 <= n <= 8:
        raise UsageError(f"N must lie in [2, 8], got {n}")
    rep = Report("verify-single", {"N": n, "seed": seed})
    rng = np.random.default_rng(seed)
    ctx = WHContext(n)
    elems = list(ctx.elements())
    order = wh_group_order(ctx)
    tol = dense.default_tol(n)

    rep.check("|H(N)| by enumeration", (n**3) * (1 if n % 2 else 2), len(set(elems)))
    rep.check("distinct dense images of H(N)", order, _count_distinct([to_dense(a) for a in elems], tol))

    z = center(ctx) if n <= 6 else [a for a in elems
                                    if all(wh_mul(a, g) == wh_mul(g, a) for g in (ctx.element(0, 1, 0),
                                                                                  ctx.element(0, 0, 1)))]
    rep.check("center = phase elements", sorted((l, 0, 0) for l in range(ctx.phase_order)),
              sorted(a.as_tuple() for a in z))

    ident = ctx.identity()
    if n <= 3:
        triples = product(elems, repeat=3)
    else:
        triples = ((elems[a], elems[b], elems[c]) for a, b, c in rng.integers(len(elems), size=(10_000, 3)))
    assoc = all(wh_mul(wh_mul(a, b), c) == wh_mul(a, wh_mul(b, c)) for a, b, c in triples)
    rep.check("associativity", True, assoc)
    rep.check("identity and inverses", True,
              all(wh_mul(ident, a) == a == wh_mul(a, ident)
                  and wh_mul(a, wh_inverse(a)) == ident == wh_mul(wh_inverse(a), a) for a in elems))
    pairs = rng.integers(len(elems), size=(1000, 2))
    rep.check("to_dense is a homomorphism", True, all(
        dense.allclose(to_dense(wh_mul(elems[a], elems[b])), to_dense(elems[a]) @ to_dense(elems[b]))
        for a, b in pairs))

    s, d, q, p = c1.build_S(n), c1.build_D(n), clock(n), shift(n)
    rep.check("S, D unitary", True, dense.is_unitary(s) and dense.is_unitary(d))
    rep.check("S Q S^-1 = P^-1", True, dense.allclose(dense.ad_action(s, q), p.conj().T))
    rep.check("S P S^-1 = Q", True, dense.allclose(dense.ad_action(s, p), q))
    rep.check("D Q D^-1 = Q", True, dense.allclose(dense.ad_action(d, q), q))
    rep.check("D P D^-1 = alpha Q P", True, dense.allclose(dense.ad_action(d, p), c1.alpha(n) * q @ p))
    rep.check("phi(S)", [[0, 1], [n - 1, 0]], dense.phi_of(s, ctx).rows())
    rep.check("phi(D)", [[1, 1], [0, 1]], dense.phi_of(d, ctx).rows())

    hom = True
    for _ in range(50):
        x = _random_word(rng, n, int(rng.integers(0, 7)))
        y = _random_word(rng, n, int(rng.integers(0, 7)))
        hom &= dense.phi_of(x @ y, ctx) == dense.phi_of(x, ctx) @ dense.phi_of(y, ctx)
    rep.check("phi is a homomorphism on random words", True, bool(hom))
    phase_ok = all(
        dense.phi_of(np.exp(1j * a) * x, ctx) == dense.phi_of(x, ctx)
        for a, x in ((rng.uniform(0, 2 * np.pi), _random_word(rng, n, 4)) for _ in range(20)))
    rep.check("phi ignores global phase", True, phase_ok)

    sl2 = c1.sl2_enumerate(n)
    rep.check("|SL(2,Z_N)| enumeration = formula", sl2_order(n), len(sl2))
    rep.check("S, D reach all of SL(2,Z_N)", sl2_order(n), len(c1.sl2_bfs(n)))
    points = [PhasePoint(n, i, j) for i, j in product(range(n), repeat=2)]
    if n <= 4:
        samples = ((m, u, v) for m in sl2 for u in points for v in points)
    else:
        idx = rng.integers([len(sl2), len(points), len(points)], size=(10_000, 3))
        samples = ((sl2[a], points[b], points[c]) for a, b, c in idx)
    rep.check("SL(2,Z_N) preserves the symplectic form", True, all(
        symplectic_form(c1.sl2_act(m, u), c1.sl2_act(m, v)) == symplectic_form(u, v) for m, u, v in samples))

    if n == 2:
        group = c1.finite_closure([s, d], max_closure)
        rep.check("closure(S2,D2) has 192 elements", 192, len(group))
        cube = np.linalg.matrix_power(s @ d, 3)
        scalar = complex(cube[0, 0])
        nu = int(round(np.angle(scalar) / (np.pi / 4))) % 8
        rep.results["(S2 D2)^3"] = {"scalar": scalar, "eta_power": nu}
        rep.check("(S2 D2)^3 is a scalar of order 8", 8,
                  8 // np.gcd(nu, 8) if dense.allclose(cube, scalar * np.eye(2)) else 0)
        rep.check("(S2 D2)^3 in closure(S2,D2)", True, c1.contains(group, cube))
        rep.check("e^{i pi/4} I in closure(S2,D2)", True, c1.contains(group, c1.eta() * np.eye(2)))
        rep.check("closure(S2,D2) matches the parametrized list", True, _matches_n2_list(group))
    if n % 2:
        rep.check("Q_N, P_N in closure(S_N, D_N) up to phase", True,
                  c1.generates_up_to_phase([s, d], [q, p], max_closure))
    return rep


def n2_parametrized_list() -> list[np.ndarray]:
    """eta^nu times the 24 patterns diag(1,a), [[0,1],[a,0]], [[1,b],[a,-ab]]/sqrt2."""
    units = [1, 1j, -1, -1j]
    base = [np.array([[1, 0], [0, a]]) for a in units]
    base += [np.array([[0, 1], [a, 0]]) for a in units]
    base += [np.array([[1, b], [a, -a * b]]) / np.sqrt(2) for a in units for b in units]
    return [c1.eta() ** nu * m for nu in range(8) for m in base]


def _matches_n2_list(group: Sequence[np.ndarray]) -> bool:
    ref = n2_parametrized_list()
    return (len(group) == len(ref) and _count_distinct(ref, 1e-9) == len(ref)
            and all(c1.contains(ref, g) for g in group))


def verify_multi(dims: Sequence[int], max_closure: int = mp.CLOSURE_GUARD,
                 max_enum: int = mp.ENUM_GUARD) -> Report:
    dims = mp.check_dims(dims)
    rep = Report("verify-multi", {"dims": list(dims)})
    if prod(dims) > mp.DENSE_GUARD:
        raise UsageError(f"total dimension {prod(dims)} exceeds the dense guard {mp.DENSE_GUARD}")
    entries = mp.verify_normalizer_generators(dims)
    rep.results["conjugations"] = entries
    for e in entries:
        rep.check(f"{e['generator']} maps A_{e['A_m']} into the tensor WH group", True, e["pass"])
    images = mp.generator_images(dims)
    rep.check("generator images are symplectic", True, all(mp.is_symplectic(h) for h in images))
    try:
        count = mp.sp_closure(dims, max_closure)
    except GuardExceededError as exc:
        rep.results["closure_skipped"] = str(exc)
        return rep
    rep.results["closure_order"] = count
    if mp.enumeration_size(dims) <= max_enum:
        rep.check("closure order = enumeration count", len(mp.sp_enumerate(dims, max_enum)), count)
    if len(set(dims)) == 1:
        rep.check(f"closure order = |Sp({2 * len(dims)},Z_{dims[0]})|", sp_order(len(dims), dims[0]), count)
    factors = mp.decompose_symmetry(dims)
    orders = [_factor_order(f, max_closure, max_enum) for f in factors]
    if None not in orders:
        rep.check("closure order = product over elementary blocks", prod(orders), count)
    return rep


def _factor_order(f: mp.SymmetryFactor, max_closure: int, max_enum: int) -> int | None:
    known = f.known_order()
    if known is not None:
        return known
    if mp.enumeration_size(f.dims()) <= max_closure:
        return mp.sp_closure(f.dims(), max_closure)
    return None


def cmd_decompose(dims: Sequence[int], max_closure: int = mp.CLOSURE_GUARD) -> Report:
    dims = mp.check_dims(dims)
    rep = Report("decompose", {"dims": list(dims)})
    factors = mp.decompose_symmetry(dims)
    rep.results["factors"] = [f.as_dict() for f in factors]
    rep.results["decomposition"] = mp.format_decomposition(factors)
    rep.check("blocks conserve the total dimension", prod(dims), prod(prod(f.moduli) for f in factors))
    within = all(
        (f.known_order() is not None and f.known_order() <= max_closure)
        or (f.known_order() is None and mp.enumeration_size(f.dims()) <= max_closure)
        for f in factors)
    if not within:
        rep.results["cross_checks"] = "skipped: a factor is beyond the closure guard"
        return rep
    orders = []
    for f in factors:
        count = mp.sp_closure(f.dims(), max_closure)
        orders.append(count)
        if f.known_order() is not None:
            rep.check(f"|{f.label()}| closure = closed form", f.known_order(), count)
    if prod(orders) <= max_closure and prod(dims) <= mp.DENSE_GUARD:
        rep.check("closure of the whole system = product of blocks", prod(orders), mp.sp_closure(dims, max_closure))
    return rep


def cmd_lift(n: int, a: int, b: int, c: int, d: int) -> Report:
    if (a * d - b * c) % n != 1 % n:
        raise UsageError(f"determinant {a * d - b * c} is not 1 mod {n}")
    m = c1.SL2Mat(n, a, b, c, d)
    rep = Report("lift", {"N": n, "matrix": m.rows()})
    word = c1.lift_sl2(m)
    rep.results["word"] = list(word)
    rep.results["length"] = len(word)
    rep.check("word evaluates to the matrix", m.rows(), c1.evaluate_word(word, n).rows())
    rep.check("dense word has the matrix as phi image", m.rows(),
              dense.phi_of(c1.word_to_dense(word, n), WHContext(n)).rows())
    return rep


def cmd_closure(dims: Sequence[int], finite: bool, max_closure: int, max_enum: int) -> Report:
    dims = mp.check_dims(dims)
    rep = Report("closure", {"dims": list(dims), "finite": finite})
    if finite:
        if len(dims) != 1:
            raise UsageError("--finite takes a single dimension")
        n = dims[0]
        group = c1.finite_closure([c1.build_S(n), c1.build_D(n)], max_closure)
        rep.results["finite_closure_order"] = len(group)
        if n == 2:
            rep.check("closure(S2,D2) has 192 elements", 192, len(group))
        return rep
    count = mp.sp_closure(dims, max_closure)
    rep.results["order"] = count
    if mp.enumeration_size(dims) <= max_enum:
        rep.check("closure = enumeration", len(mp.sp_enumerate(dims, max_enum)), count)
    if len(dims) == 1:
        rep.check("closure = |SL(2,Z_N)|", sl2_order(dims[0]), count)
    elif len(set(dims)) == 1:
        rep.check(f"closure = |Sp({2 * len(dims)},Z_{dims[0]})|", sp_order(len(dims), dims[0]), count)
    return rep


def _read_circuit(path: str) -> stabsim.Circuit:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    try:
        return stabsim.load_circuit(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    except (ValueError, TypeError, KeyError) as exc:
        raise UsageError(f"{path}: {exc}") from None


def _parse_dims_spec(text: str) -> list[int]:
    """'3x50' means fifty factors of dimension 3; otherwise a comma list."""
    try:
        if "x" in text:
            base, count = text.split("x")
            return [int(base)] * int(count)
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"cannot parse dims {text!r}") from None


def cmd_sim(mode: str, path: str | None, dims_spec: str | None, gates: int, seed: int) -> Report:
    if mode == "bench":
        dims = _parse_dims_spec(dims_spec or "3x50")
        rep = Report("sim bench", {"dims": list(dims), "gates": gates, "seed": seed})
        result = stabsim.benchmark(dims, gates, seed)
        result.pop("dims")
        rep.results.update(result)
        rep.check("tableau is symplectic", True, result["symplectic"])
        return rep
    if path is None:
        raise UsageError(f"sim {mode} needs a circuit file")
    circuit = _read_circuit(path)
    rep = Report(f"sim {mode}", {"circuit": path, "dims": list(circuit.dims), "gates": len(circuit.gates)})
    if mode == "run":
        tab = stabsim.simulate(circuit)
        rep.results["tableau"] = stabsim.tableau_to_dict(tab)
        rep.check("tableau is symplectic", True, mp.is_symplectic(tab.matrix))
        return rep
    if prod(circuit.dims) > mp.DENSE_GUARD:
        raise UsageError(f"refusing dense verification: total dimension {prod(circuit.dims)} "
                         f"exceeds {mp.DENSE_GUARD}")
    result = stabsim.verify_vs_dense(circuit)
    rep.results.update(result)
    rep.check("simulated tableau = dense extraction", True, result["match"])
    return rep


# argument handling

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    p.add_argument("--json", action="store_true", help="emit the report as JSON")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-closure", type=int, default=mp.CLOSURE_GUARD)
    p.add_argument("--max-enum", type=int, default=mp.ENUM_GUARD)
    p.add_argument("--tol", type=float, default=None,
                   help="per-dimension tolerance coefficient (default 1e-9, or $QC_TOL)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="qclifford", description=__doc__, parents=[common], allow_abbrev=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("orders", parents=[common], allow_abbrev=False, help="cardinality table of SL(2,Z_N) and C(N)")
    p.add_argument("--max", type=int, default=8, dest="max_n")

    p = sub.add_parser("verify-single", parents=[common], allow_abbrev=False, help="single-system invariant suite")
    p.add_argument("N", type=int)

    p = sub.add_parser("verify-multi", parents=[common], allow_abbrev=False, help="composite-system generator checks")
    p.add_argument("dims", type=int, nargs="+")

    p = sub.add_parser("decompose", parents=[common], allow_abbrev=False, help="elementary divisor decomposition")
    p.add_argument("dims", type=int, nargs="+")

    p = sub.add_parser("lift", parents=[common], allow_abbrev=False, help="shortest S/D word for [[a,c],[b,d]]")
    for name in ("N", "a", "b", "c", "d"):
        p.add_argument(name, type=int)

    p = sub.add_parser("closure", parents=[common], allow_abbrev=False, help="order of a generated symmetry group")
    p.add_argument("dims", type=int, nargs="+")
    p.add_argument("--finite", action="store_true", help="dense closure of S_N, D_N instead")

    p = sub.add_parser("sim", parents=[common], allow_abbrev=False, help="Clifford circuit simulator")
    p.add_argument("mode", choices=["run", "verify", "bench"])
    p.add_argument("circuit", nargs="?")
    p.add_argument("--dims", default=None, help="bench dims, e.g. 3x50 or 2,3,4")
    p.add_argument("--gates", type=int, default=10_000)
    return parser


def run(args: argparse.Namespace) -> Report:
    if args.command == "orders":
        return cmd_orders(args.max_n)
    if args.command == "verify-single":
        return verify_single(args.N, args.seed, args.max_closure)
    if args.command == "verify-multi":
        return verify_multi(args.dims, args.max_closure, args.max_enum)
    if args.command == "decompose":
        return cmd_decompose(args.dims, args.max_closure)
    if args.command == "lift":
        return cmd_lift(args.N, args.a, args.b, args.c, args.d)
    if args.command == "closure":
        return cmd_closure(args.dims, args.finite, args.max_closure, args.max_enum)
    if args.command == "sim":
        return cmd_sim(args.mode, args.circuit, args.dims, args.gates, args.seed)
    raise UsageError(f"unknown command {args.command}")


def render_text(rep: Report) -> str:
    lines = [f"{rep.command}  {json.dumps(_plain(rep.inputs))}"]
    for key, value in rep.results.items():
        if key == "rows":
            lines.append(f"  {'N':>3} {'|P_N|':>7} {'|SL2| formula':>14} {'|SL2| enum':>11} {'|P_N x| SL2|':>13}")
            for r in value:
                lines.append(f"  {r['N']:>3} {r['phase_space']:>7} {r['sl2_formula']:>14} "
                             f"{r['sl2_enumerated']:>11} {r['semidirect']:>13}")
        elif key == "conjugations":
            continue
        else:
            lines.append(f"  {key}: {json.dumps(_plain(value))}")
    for c in rep.checks:
        lines.append(f"  [{'PASS' if c['pass'] else 'FAIL'}] {c['name']}")
    lines.append(f"  {sum(c['pass'] for c in rep.checks)}/{len(rep.checks)} checks passed"
                 f"  ({datetime.datetime.now().isoformat(timespec='seconds')})")
    return "\n".join(lines)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    tol = args.tol if args.tol is not None else os.environ.get("QC_TOL")
    try:
        if tol is not None:
            dense.set_tolerance_base(float(tol))
        rep = run(args)
    except (UsageError, GuardExceededError, NotInNormalizerError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.json:
        print(json.dumps(rep.as_dict(), sort_keys=True, indent=2))
    else:
        print(render_text(rep))
    return 0 if rep.ok else 1


if __name__ == "__main__":
    sys.exit(main())
