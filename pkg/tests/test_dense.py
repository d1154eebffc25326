import numpy as np
import pytest
from hypothesis import given, strategies as st

from qclifford.clifford1 import alpha, build_D, build_S
from qclifford.dense import (
    ad_action,
    default_tol,
    equal_up_to_phase,
    extract_wh_coset,
    is_unitary,
    phi_of,
    set_tolerance_base,
    tolerance_base,
)
from qclifford.errors import NotInNormalizerError
from qclifford.weylheis import PhasePoint, WHContext, clock, clock_power, shift, shift_power

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Z = np.diag([1, -1]).astype(complex)
HADAMARD = np.array([[1, 1], [1, -1]]) / np.sqrt(2)


def random_unitary(n, rng):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def test_equal_up_to_phase_examples():
    u = random_unitary(3, np.random.default_rng(0))
    m = equal_up_to_phase(u, u)
    assert m.matched and abs(m.phase - 1) < 1e-12
    m = equal_up_to_phase(-1j * u, u)
    assert m.matched and abs(m.phase + 1j) < 1e-12
    assert not equal_up_to_phase(SIGMA_Z, SIGMA_X)
    with pytest.raises(ValueError):
        equal_up_to_phase(np.eye(2), np.eye(3))


@given(st.floats(0, 2 * np.pi), st.integers(2, 6))
def test_equal_up_to_phase_recovers_phase(angle, n):
    u = random_unitary(n, np.random.default_rng(n))
    m = equal_up_to_phase(np.exp(1j * angle) * u, u)
    assert m.matched
    assert abs(m.phase - np.exp(1j * angle)) < 1e-9


def test_ad_action_examples():
    a = random_unitary(2, np.random.default_rng(1))
    np.testing.assert_allclose(ad_action(np.eye(2), a), a)
    np.testing.assert_allclose(ad_action(build_S(2), SIGMA_Z), SIGMA_X, atol=1e-12)
    got = ad_action(build_D(2), SIGMA_X)
    np.testing.assert_allclose(got, alpha(2) * SIGMA_Z @ SIGMA_X, atol=1e-12)
    np.testing.assert_allclose(got, [[0, 1j], [-1j, 0]], atol=1e-12)


def test_extract_wh_coset_examples():
    assert extract_wh_coset(clock(4), WHContext(4)) == PhasePoint(4, 1, 0)
    w = np.exp(2j * np.pi / 3) * shift_power(3, 2)
    assert extract_wh_coset(w, WHContext(3)) == PhasePoint(3, 0, 2)
    with pytest.raises(NotInNormalizerError):
        extract_wh_coset(HADAMARD, WHContext(2))


@pytest.mark.parametrize("n", range(2, 7))
def test_extract_wh_coset_every_element(n):
    ctx = WHContext(n)
    for i in range(n):
        for j in range(n):
            w = np.exp(0.3j * (i + 2 * j)) * clock_power(n, i) @ shift_power(n, j)
            assert extract_wh_coset(w, ctx) == PhasePoint(n, i, j)


@pytest.mark.parametrize("n", range(2, 9))
def test_phi_examples(n):
    ctx = WHContext(n)
    assert phi_of(clock(n), ctx).rows() == [[1, 0], [0, 1]]
    assert phi_of(build_S(n), ctx).rows() == [[0, 1], [n - 1, 0]]
    assert phi_of(build_D(n), ctx).rows() == [[1, 1], [0, 1]]


def test_phi_rejects_non_normalizer():
    with pytest.raises(NotInNormalizerError):
        phi_of(random_unitary(3, np.random.default_rng(5)), WHContext(3))


def _word(rng, n, length):
    pool = [build_S(n), build_D(n), clock(n), shift(n)]
    out = np.eye(n, dtype=complex)
    for k in rng.integers(4, size=length):
        out = out @ pool[k]
    return out


@pytest.mark.parametrize("n", range(2, 7))
def test_phi_homomorphism(n):
    ctx = WHContext(n)
    rng = np.random.default_rng(n)
    for _ in range(40):
        x, y = _word(rng, n, rng.integers(0, 7)), _word(rng, n, rng.integers(0, 7))
        px, py = phi_of(x, ctx), phi_of(y, ctx)
        assert phi_of(x @ y, ctx) == px @ py
        assert (px.a * px.d - px.b * px.c) % n == 1 % n


@given(st.floats(0, 2 * np.pi), st.integers(2, 6), st.integers(0, 10**6))
def test_phi_phase_invariant(angle, n, seed):
    ctx = WHContext(n)
    x = _word(np.random.default_rng(seed), n, 5)
    assert phi_of(np.exp(1j * angle) * x, ctx) == phi_of(x, ctx)


def test_tolerance_scaling_and_override():
    base = tolerance_base()
    assert default_tol(8) == pytest.approx(8 * base)
    try:
        set_tolerance_base(1e-6)
        assert default_tol(4) == pytest.approx(4e-6)
    finally:
        set_tolerance_base(base)
    with pytest.raises(ValueError):
        set_tolerance_base(0)


def test_is_unitary():
    assert is_unitary(build_S(5))
    assert not is_unitary(np.ones((2, 2)))
