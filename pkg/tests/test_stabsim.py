import json
from math import gcd

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qclifford.errors import GuardExceededError
from qclifford.dense import equal_up_to_phase
from qclifford.multipartite import BlockMatrix, build_R, extract_block_matrix, is_symplectic, tensor_wh
from qclifford.stabsim import (
    COUPLE,
    COUPLE_INV,
    FOURIER,
    KINDS,
    PAULI_X,
    PAULI_Z,
    PHASE,
    Circuit,
    Gate,
    analytic_couple_block,
    analytic_local_block,
    benchmark,
    circuit_from_dict,
    circuit_to_dict,
    circuit_unitary,
    first_difference,
    gate_rep,
    local_dense,
    load_circuit,
    random_circuit,
    simulate,
    verify_vs_dense,
)

ORACLE_DIMS = [(2, 2), (2, 3), (3, 3), (2, 4), (2, 3, 4)]


def test_gate_validation():
    with pytest.raises(ValueError):
        Circuit((2, 2), [Gate(COUPLE, 0, 1)])
    with pytest.raises(ValueError):
        Circuit((2, 2), [Gate(FOURIER, 2)])
    with pytest.raises(ValueError):
        Circuit((2, 2), [Gate(FOURIER, 0, 1)])
    with pytest.raises(ValueError):
        Circuit((2, 2), [Gate("TOFFOLI", 0)])


def test_couple_rep_on_two_qubits():
    rep = gate_rep(Gate(COUPLE, 1, 0), (2, 2))
    assert rep.tolist() == [[1, 0, 0, 0], [0, 1, 1, 0], [0, 0, 1, 0], [1, 0, 0, 1]]


def test_pauli_reps_are_identity():
    for kind in (PAULI_X, PAULI_Z):
        assert gate_rep(Gate(kind, 0, power=2), (3, 5)) == BlockMatrix.identity((3, 5))


@pytest.mark.parametrize("n", range(2, 37))
def test_local_blocks_match_oracle(n):
    for kind in (FOURIER, PHASE):
        assert np.array_equal(extract_block_matrix(local_dense(kind, n), (n,)).array,
                              analytic_local_block(kind, n))


@pytest.mark.parametrize("ni, nj", [(a, b) for a in range(2, 13) for b in range(2, 13) if a * b <= 36])
def test_couple_blocks_match_oracle(ni, nj):
    r = build_R((ni, nj), 0, 1)
    for inverse, u in ((False, r), (True, r.conj().T)):
        assert np.array_equal(extract_block_matrix(u, (ni, nj)).array,
                              analytic_couple_block(ni, nj, inverse))


def test_fourier_has_order_four():
    c = Circuit((5,), [Gate(FOURIER, 0)] * 4)
    assert simulate(c).matrix == BlockMatrix.identity((5,))
    c2 = Circuit((5,), [Gate(FOURIER, 0)] * 2)
    assert simulate(c2).matrix.tolist() == [[4, 0], [0, 4]]


def test_couple_then_inverse_is_identity():
    c = Circuit((4, 6), [Gate(COUPLE, 1, 0), Gate(COUPLE_INV, 1, 0)])
    assert simulate(c).matrix == BlockMatrix.identity((4, 6))


def test_example_tableau():
    c = Circuit((2, 2), [Gate(FOURIER, 0), Gate(COUPLE, 1, 0), Gate(PHASE, 1)])
    assert simulate(c).matrix.tolist() == [[0, 1, 0, 0], [1, 0, 1, 0], [0, 0, 1, 0], [0, 1, 1, 1]]


@pytest.mark.parametrize("dims", ORACLE_DIMS)
def test_random_circuits_match_oracle(dims):
    rng = np.random.default_rng(sum(dims))
    for _ in range(10):
        res = verify_vs_dense(random_circuit(dims, 30, rng))
        assert res["match"], res["first_difference"]


@given(st.sampled_from(ORACLE_DIMS), st.integers(0, 2**31), st.integers(0, 20), st.integers(0, 20))
@settings(max_examples=40)
def test_composition_law(dims, seed, n1, n2):
    rng = np.random.default_rng(seed)
    a, b = random_circuit(dims, n1, rng), random_circuit(dims, n2, rng)
    assert simulate(a + b).matrix == simulate(b).matrix @ simulate(a).matrix


@given(st.sampled_from(ORACLE_DIMS), st.integers(0, 2**31), st.data())
@settings(max_examples=30)
def test_phase_space_contract(dims, seed, data):
    c = random_circuit(dims, 12, seed)
    u = circuit_unitary(c)
    t = simulate(c).matrix
    coords = [data.draw(st.integers(0, n - 1)) for n in dims for _ in range(2)]
    image = [int(x) for x in t.array @ np.array(coords)]
    lhs = u @ tensor_wh(dims, coords) @ u.conj().T
    assert equal_up_to_phase(lhs, tensor_wh(dims, image))


@given(st.sampled_from([(2, 3), (3, 3, 3), (4, 6, 9), (5, 7)]), st.integers(0, 2**31))
@settings(max_examples=30)
def test_tableau_always_symplectic(dims, seed):
    c = random_circuit(dims, 40, seed)
    assert is_symplectic(simulate(c, check_each=True).matrix)


def test_simulation_is_deterministic():
    c = random_circuit((3,) * 10, 500, 3)
    assert simulate(c).digest() == simulate(c).digest()
    assert random_circuit((3,) * 10, 500, 3) == c


def test_large_couple_uses_analytic_block():
    dims = (7, 11)
    t = simulate(Circuit(dims, [Gate(COUPLE, 1, 0)])).matrix
    g = gcd(7, 11)
    assert t.array[3, 0] == (-11 // g) % 11 and t.array[1, 2] == (-7 // g) % 7


def test_dense_guard():
    with pytest.raises(GuardExceededError):
        circuit_unitary(Circuit((6, 7), []))


def test_first_difference_reports_block():
    a = BlockMatrix.identity((2, 2))
    b = gate_rep(Gate(PHASE, 1), (2, 2))
    assert first_difference(a, a) is None
    assert first_difference(a, b) == (1, 1)


def test_json_round_trip():
    c = random_circuit((2, 3, 4), 25, 11)
    d = circuit_to_dict(c)
    assert circuit_from_dict(json.loads(json.dumps(d))) == c
    assert all(g["target"] >= 1 for g in d["gates"])


def test_json_kinds_and_errors():
    c = load_circuit('{"dims": [2, 3], "gates": [{"kind": "X", "target": 2, "power": 2},'
                     ' {"kind": "COUPLE", "control": 1, "target": 2}]}')
    assert c.gates == (Gate(PAULI_X, 1, power=2), Gate(COUPLE, 1, 0))
    with pytest.raises(json.JSONDecodeError):
        load_circuit('{"dims": [2,')
    with pytest.raises(ValueError):
        load_circuit('{"gates": []}')
    with pytest.raises(ValueError):
        load_circuit('{"dims": [2], "gates": [{"kind": "Y", "target": 1}]}')


def test_benchmark_small():
    res = benchmark((3,) * 5, 200, seed=1)
    assert res["symplectic"] and res["gates"] == 200
    assert res["tableau_sha256"] == benchmark((3,) * 5, 200, seed=1)["tableau_sha256"]


def test_random_circuit_single_factor_has_no_couplings():
    c = random_circuit((5,), 100, 0)
    assert all(g.kind not in (COUPLE, COUPLE_INV) for g in c.gates)
    assert set(KINDS) >= {g.kind for g in c.gates}
