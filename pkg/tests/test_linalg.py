import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from triqubit.linalg import (
    absorb_phases, basis_to_unitary, cayley_hdet, hermitian_eig2, quadratic_roots, svd2,
    unitary_with_first_row,
)
from triqubit.state import haar_random_states

finite = st.floats(-1, 1, allow_nan=False, allow_infinity=False)
mats = arrays(np.float64, (2, 2, 2), elements=finite)


def complex_2x2(parts):
    return parts[0] + 1j * parts[1]


def hdet_oracle(t):
    """Discriminant of the binary quadratic det(x T0 + y T1)."""
    t0, t1 = t[0], t[1]
    a = np.linalg.det(t0)
    c = np.linalg.det(t1)
    b = np.linalg.det(t0 + t1) - a - c
    return b * b - 4 * a * c


@settings(max_examples=200, deadline=None)
@given(mats)
def test_hermitian_eig2(parts):
    m = complex_2x2(parts)
    h = m @ m.conj().T
    vals, vecs = hermitian_eig2(h)
    np.testing.assert_allclose(vals, np.linalg.eigvalsh(h)[::-1], atol=1e-12)
    np.testing.assert_allclose(h @ vecs, vecs * vals, atol=1e-12)
    np.testing.assert_allclose(vecs.conj().T @ vecs, np.eye(2), atol=1e-12)


@settings(max_examples=200, deadline=None)
@given(mats)
def test_svd2_diagonalises(parts):
    t = complex_2x2(parts)
    sv = svd2(t)
    d = sv.left @ t @ sv.right.T
    np.testing.assert_allclose(d, np.diag(sv.values), atol=1e-12)
    np.testing.assert_allclose(sv.values, np.linalg.svd(t, compute_uv=False), atol=1e-12)
    for u in (sv.left, sv.right):
        np.testing.assert_allclose(u @ u.conj().T, np.eye(2), atol=1e-12)


def test_svd2_rank_one_and_zero():
    t = np.outer([1, 1j], [2, 0])
    sv = svd2(t)
    assert sv.values[1] == pytest.approx(0, abs=1e-15)
    np.testing.assert_allclose(sv.left @ t @ sv.right.T, np.diag(sv.values), atol=1e-14)
    sv = svd2(np.zeros((2, 2)))
    np.testing.assert_allclose(sv.values, 0)


@pytest.mark.parametrize("coeffs,expected", [
    ((1, -3, 2), {1.0, 0.5}),   # (u0 - u1)(u0 - 2 u1), x = u1/u0
    ((1, 0, -4), {0.5, -0.5}),
])
def test_quadratic_roots_simple(coeffs, expected):
    r = quadratic_roots(*coeffs)
    xs = {round((v[1] / v[0]).real, 12) for v in r.roots}
    assert xs == expected
    for v in r.roots:
        a, b, c = coeffs
        assert abs(a * v[0] ** 2 + b * v[0] * v[1] + c * v[1] ** 2) < 1e-14


def test_quadratic_roots_at_infinity_and_degenerate():
    r = quadratic_roots(1, 1, 0)  # u0 (u0 + u1): one root at infinity
    assert r.degeneracy == "distinct"
    assert any(abs(v[0]) < 1e-15 for v in r.roots)
    r = quadratic_roots(0, 1, 1)  # u1 (u0 + u1): one root at x = 0
    assert any(abs(v[1]) < 1e-15 for v in r.roots)
    r = quadratic_roots(1, 2, 1)
    assert r.degeneracy == "double"
    r = quadratic_roots(0, 0, 0)
    assert r.degeneracy == "identically-singular"
    np.testing.assert_allclose(r.roots[0], [1, 0])


def test_unitaries_from_vectors():
    v = np.array([0.6, 0.8j])
    u = unitary_with_first_row(v)
    np.testing.assert_allclose(u[0], v)
    np.testing.assert_allclose(u @ u.conj().T, np.eye(2), atol=1e-15)
    b = basis_to_unitary(v)
    np.testing.assert_allclose(b @ v, [1, 0], atol=1e-15)


def test_absorb_phases_rank():
    rng = np.random.default_rng(0)
    t = rng.standard_normal((2, 2, 2)) + 1j * rng.standard_normal((2, 2, 2))
    diag, fixed = absorb_phases(t, list(np.ndindex(2, 2, 2)))
    assert len(fixed) == 4
    out = np.einsum("i,j,k,ijk->ijk", *diag, t)
    for pos in fixed:
        assert abs(out[pos].imag) < 1e-12 and out[pos].real > 0


def test_cayley_hdet_matches_discriminant():
    x = haar_random_states(500, seed=3).reshape(-1, 2, 2, 2)
    h = cayley_hdet(x)
    oracle = np.array([hdet_oracle(t) for t in x])
    np.testing.assert_allclose(h, oracle, atol=1e-14)
    ghz = np.zeros((2, 2, 2))
    ghz[0, 0, 0] = ghz[1, 1, 1] = 1 / np.sqrt(2)
    assert cayley_hdet(ghz) == pytest.approx(0.25)
