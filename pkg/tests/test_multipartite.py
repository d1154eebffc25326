from itertools import product

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qclifford.clifford1 import SL2Mat, build_D, build_S, sl2_enumerate
from qclifford.errors import GuardExceededError, NotInNormalizerError
from qclifford.multipartite import (
    BlockMatrix,
    MultiPhasePoint,
    act,
    adjoint_star,
    all_phase_points,
    block_mul,
    build_R,
    decompose_symmetry,
    embed,
    enumeration_size,
    extract_block_matrix,
    format_decomposition,
    generator_images,
    is_symplectic,
    pairing,
    recognize_tensor_wh,
    row_moduli,
    scale_matrix,
    sp_closure,
    sp_enumerate,
    sp_inverse,
    tensor_wh,
    normalizer_generators,
    verify_normalizer_generators,
)
from qclifford.numtheory import sl2_order

DIMS_CHOICES = [(2,), (3,), (4,), (2, 2), (2, 3), (4, 6), (2, 4), (3, 9), (2, 3, 4), (6, 10, 15)]


@st.composite
def monoid_elements(draw, dims=None):
    if dims is None:
        dims = draw(st.sampled_from(DIMS_CHOICES))
    s = scale_matrix(dims)
    radix = row_moduli(dims)[:, None] // s
    digits = np.array([[draw(st.integers(0, int(r) - 1)) for r in row] for row in radix])
    return BlockMatrix(dims, digits * s)


def test_scale_matrix_example():
    np.testing.assert_array_equal(scale_matrix((4, 6)), [[1, 1, 2, 2], [1, 1, 2, 2], [3, 3, 1, 1], [3, 3, 1, 1]])


def test_rejects_non_divisible_entries():
    arr = np.eye(4, dtype=np.int64)
    arr[0, 2] = 1  # needs a multiple of 4/gcd(4,6) = 2
    with pytest.raises(ValueError):
        BlockMatrix((4, 6), arr)


def test_identity_and_J():
    ident = BlockMatrix.identity((2, 3))
    j = BlockMatrix.J((2, 3))
    assert ident @ j == j == j @ ident
    assert is_symplectic(ident) and is_symplectic(j)
    assert not is_symplectic(BlockMatrix((2, 3), np.zeros((4, 4), dtype=np.int64)))


@given(monoid_elements())
def test_identity_is_neutral(h):
    ident = BlockMatrix.identity(h.dims)
    assert block_mul(ident, h) == h == block_mul(h, ident)


@given(st.sampled_from(DIMS_CHOICES).flatmap(
    lambda d: st.tuples(monoid_elements(d), monoid_elements(d), monoid_elements(d))))
def test_monoid_closed_and_associative(triple):
    h, g, f = triple
    hg = block_mul(h, g)
    BlockMatrix(hg.dims, hg.array)  # divisibility re-checked by the constructor
    assert block_mul(hg, f) == block_mul(h, block_mul(g, f))


@given(monoid_elements((4, 6)), monoid_elements((4, 6)), st.data())
def test_product_well_defined_across_moduli(h, g, data):
    # shifting any entry of g by its row modulus must not change the product
    mods = row_moduli((4, 6))
    lifted = g.array.copy()
    for r in range(4):
        for c in range(4):
            lifted[r, c] += int(mods[r]) * data.draw(st.integers(-3, 3))
    raw = h.array @ lifted
    assert np.array_equal(np.mod(raw, mods[:, None]), block_mul(h, g).array)


@given(monoid_elements())
def test_adjoint_is_involution(h):
    assert adjoint_star(adjoint_star(h)) == h


@given(st.sampled_from(DIMS_CHOICES).flatmap(lambda d: st.tuples(monoid_elements(d), monoid_elements(d))))
def test_adjoint_reverses_products(pair):
    h, g = pair
    assert adjoint_star(block_mul(h, g)) == block_mul(adjoint_star(g), adjoint_star(h))


@pytest.mark.parametrize("dims, count", [((2,), 6), ((3,), 24), ((2, 2), 720), ((2, 3), 144)])
def test_sp_enumerate_counts(dims, count):
    assert len(sp_enumerate(dims)) == count


def test_sp_enumerate_guard():
    assert enumeration_size((3, 3)) == 3 ** 16
    with pytest.raises(GuardExceededError):
        sp_enumerate((3, 3))


@pytest.mark.parametrize("dims", [(2,), (2, 2), (2, 3)])
def test_sp_enumerate_is_a_group(dims):
    elems = sp_enumerate(dims)
    members = set(elems)
    ident = BlockMatrix.identity(dims)
    for h in elems:
        inv = sp_inverse(h)
        assert inv in members
        assert h @ inv == ident == inv @ h
    rng = np.random.default_rng(0)
    for a, b in rng.integers(len(elems), size=(300, 2)):
        assert elems[a] @ elems[b] in members


@pytest.mark.parametrize("dims", [(2, 2), (2, 4), (2, 3)])
def test_symplectic_elements_preserve_pairing(dims):
    elems = sp_enumerate(dims)
    pts = list(all_phase_points(dims))
    rng = np.random.default_rng(1)
    for h in [elems[i] for i in rng.integers(len(elems), size=25)]:
        for a, b in rng.integers(len(pts), size=(60, 2)):
            u, v = pts[a], pts[b]
            assert pairing(act(h, u), act(h, v)) == pairing(u, v)


def test_pairing_is_commutator_phase():
    dims = (2, 3)
    pts = list(all_phase_points(dims))
    for u, v in product(pts[::5], pts[::7]):
        a, b = tensor_wh(dims, u.coords), tensor_wh(dims, v.coords)
        phase = np.exp(2j * np.pi * float(pairing(u, v)))
        lhs, rhs = a @ b, b @ a
        assert np.allclose(lhs, phase * rhs) or np.allclose(rhs, phase * lhs)


def test_single_factor_matches_sl2_up_to_coordinate_swap():
    swap = np.array([[0, 1], [1, 0]])
    for n in (2, 3, 4, 5):
        via_blocks = {tuple((swap @ h.array @ swap % n).ravel()) for h in sp_enumerate((n,))}
        via_sl2 = {(m.a, m.c, m.b, m.d) for m in sl2_enumerate(n)}
        assert via_blocks == via_sl2
        assert len(via_sl2) == sl2_order(n)


def test_build_R_examples():
    r = build_R((2, 2), 0, 1)
    np.testing.assert_allclose(r, np.diag([1, 1, 1, -1]))
    r = build_R((2, 4), 0, 1)
    np.testing.assert_allclose(np.diag(r), [1, 1, 1, 1, 1, -1, 1, -1])
    with pytest.raises(ValueError):
        build_R((2, 2), 1, 0)


def test_build_R_skips_intermediate_factor():
    r = build_R((2, 3, 2), 0, 2)
    assert r.shape == (12, 12)
    np.testing.assert_allclose(r, np.diag(np.diag(r)))
    digits = product(range(2), range(3), range(2))
    expected = [(-1) ** (a * c) for a, _, c in digits]
    np.testing.assert_allclose(np.diag(r), expected, atol=1e-12)


def test_extract_examples():
    cz = extract_block_matrix(build_R((2, 2), 0, 1), (2, 2))
    assert cz.tolist() == [[1, 0, 0, 0], [0, 1, 1, 0], [0, 0, 1, 0], [1, 0, 0, 1]]
    s = extract_block_matrix(embed(build_S(2), (2, 3), 0), (2, 3))
    assert s.tolist() == [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    assert extract_block_matrix(np.eye(6), (2, 3)) == BlockMatrix.identity((2, 3))


def test_recognize_rejects_non_pauli():
    with pytest.raises(NotInNormalizerError):
        recognize_tensor_wh(np.kron(build_S(2), np.eye(2)), (2, 2))


@given(st.sampled_from([(2, 2), (2, 3), (3, 3), (2, 4)]), st.data())
def test_recognize_roundtrip(dims, data):
    coords = [data.draw(st.integers(0, n - 1)) for n in dims for _ in range(2)]
    angle = data.draw(st.floats(0, 6.28))
    got = recognize_tensor_wh(np.exp(1j * angle) * tensor_wh(dims, coords), dims)
    assert list(got) == coords


@pytest.mark.parametrize("dims", [(2, 2), (2, 3), (2, 4), (3, 3)])
def test_generators_conjugate_paulis_into_wh(dims):
    report = verify_normalizer_generators(dims)
    n_gens = 2 * len(dims) + len(dims) * (len(dims) - 1) // 2
    assert len(report) == n_gens * 2 * len(dims)
    assert all(e["pass"] for e in report)


@pytest.mark.parametrize("dims", [(2, 2), (2, 3), (3, 3)])
def test_extraction_is_homomorphism(dims):
    gens = [g for _, g in normalizer_generators(dims)]
    rng = np.random.default_rng(sum(dims))
    for _ in range(8):
        x = np.eye(np.prod(dims), dtype=complex)
        y = np.eye(np.prod(dims), dtype=complex)
        for k in rng.integers(len(gens), size=4):
            x = x @ gens[k]
        for k in rng.integers(len(gens), size=4):
            y = y @ gens[k]
        ex, ey = extract_block_matrix(x, dims), extract_block_matrix(y, dims)
        assert extract_block_matrix(x @ y, dims) == ex @ ey
        assert is_symplectic(ex)


def test_generator_images_symplectic():
    assert all(is_symplectic(h) for h in generator_images((2, 3, 4)))


@pytest.mark.parametrize("dims, order", [((2, 2), 720), ((2, 3), 144), ((2, 4), 4608), ((3, 3), 51840)])
def test_sp_closure_orders(dims, order):
    assert sp_closure(dims) == order


def test_closure_agrees_with_enumeration_on_2_4():
    assert sp_closure((2, 4)) == len(sp_enumerate((2, 4)))


@pytest.mark.parametrize("dims, text", [
    ((15, 12), "SL(2,Z_4) x Sp(4,Z_3) x SL(2,Z_5)"),
    ((180, 150), "Sp_[2,4] x Sp_[3,9] x Sp_[5,25]"),
    ((6,), "SL(2,Z_2) x SL(2,Z_3)"),
    ((2, 2, 2), "Sp(6,Z_2)"),
])
def test_decompose_examples(dims, text):
    assert format_decomposition(decompose_symmetry(dims)) == text


@given(st.lists(st.integers(2, 400), min_size=1, max_size=4))
def test_decompose_conserves_dimension(dims):
    total = 1
    for f in decompose_symmetry(dims):
        for q in f.dims():
            total *= q
    assert total == int(np.prod(dims))


def test_phase_point_reduces_coordinates():
    p = MultiPhasePoint((2, 3), (3, -1, 4, 5))
    assert p.coords == (1, 1, 1, 2)


def test_sl2_local_consistency():
    # D on a single factor acts on (P, Q) as P -> Q P
    h = extract_block_matrix(build_D(5), (5,))
    assert h.tolist() == [[1, 0], [1, 1]]
    m = SL2Mat(5, 1, 0, 1, 1)
    assert (m.a, m.c, m.b, m.d) == (1, 1, 0, 1)
