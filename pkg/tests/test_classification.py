import math

import numpy as np
import pytest

from triqubit.canonical import acin_canonical, canonical_state, ghz_two_term
from triqubit.classification import (
    NU, classify, half_angle_coordinates, half_angle_l, is_real, minimal_decomposition, nu,
    real_basis, real_six_lbps, type4d_form,
)
from triqubit.ensembles import TYPE_KEYS, ghz_family_state, type_state, type_suite
from triqubit.errors import NotReal, NotType4d
from triqubit.invariants import grassl_I6
from triqubit.state import (
    GHZ, PRODUCT, W, apply_local, fidelity, haar_random_state, make_state, normalize,
    permute_parties, random_local_triple, reduced,
)

s2, s3 = 1 / math.sqrt(2), 1 / math.sqrt(3)
SUITE = type_suite(per_type=3, seed=2024)


def key_of(cls):
    return cls.tag + (f":{cls.party}" if cls.party else "")


def test_fixture_classes():
    assert key_of(classify(GHZ)) == "T2b" and nu(GHZ) == 2
    assert key_of(classify(W)) == "T3a" and nu(W) == 3
    assert key_of(classify(PRODUCT)) == "T1" and nu(PRODUCT) == 1
    assert key_of(classify(normalize([1, 0, 0, 1, 0, 0, 0, 0]))) == "T2a:A"


def test_haar_states_need_five_terms():
    for k in range(300):
        assert nu(haar_random_state(k)) == 5


@pytest.mark.parametrize("key,state", SUITE, ids=[f"{k}-{i % 3}" for i, (k, _) in enumerate(SUITE)])
def test_suite_classification(key, state):
    cls = classify(state, 1e-8)
    assert key_of(cls) == key
    # precedence soundness: nothing with fewer terms fires
    for name, r in cls.conditions.items():
        if NU[name.partition(":")[0]] < cls.nu:
            assert r > 1e-8, name
    dec = minimal_decomposition(state, cls)
    assert len(dec) == cls.nu
    assert fidelity(state, make_state(dec.tensor())) > 1 - 1e-8


@pytest.mark.parametrize("key", TYPE_KEYS)
def test_classification_is_local_unitary_invariant(key):
    state = type_state(key, [7, TYPE_KEYS.index(key)])
    base = key_of(classify(state))
    for k in range(10):
        assert key_of(classify(apply_local(state, *random_local_triple([k, 99])))) == base


def test_type2a_purity_certificate():
    cls = classify(normalize([1, 0, 0, 0, 0, 1, 0, 0]))
    assert key_of(cls) == "T2a:B"
    rho = reduced(normalize([1, 0, 0, 0, 0, 1, 0, 0]), "B").rho
    assert np.trace(rho @ rho).real > 1 - 1e-8


def test_minimal_fixtures():
    d = minimal_decomposition(GHZ)
    assert len(d) == 2
    np.testing.assert_allclose(np.abs(d.coefficients()), [s2, s2], atol=1e-12)
    d = minimal_decomposition(W)
    assert len(d) == 3
    np.testing.assert_allclose(np.abs(d.coefficients()), [s3] * 3, atol=1e-12)
    # W lands on a party-permuted {000, 101, 110} pattern: one label has weight 0
    weights = sorted(sum(lab) for lab in d.labels)
    assert weights == [0, 2, 2]


def test_four_c_label_follows_the_party():
    state = type_state("T4c:A", 5)
    assert classify(state).party == "A"
    for perm, party in (((1, 0, 2), "B"), ((2, 1, 0), "C")):
        assert classify(permute_parties(state, perm)).party == party


def test_is_real_fixtures():
    assert is_real(GHZ).witness == "both"
    assert is_real(W).isReal
    lam = np.array([0.4, 0.5, 0.3, 0.45, 0.55])
    s = canonical_state(lam / np.linalg.norm(lam), math.pi / 3)
    res = is_real(s)
    assert not res.isReal
    assert min(res.residuals) > 1e-8
    # independent confirmation: the state is not LU-equivalent to its conjugate
    assert abs(grassl_I6(acin_canonical(s)).imag) > 1e-12
    with pytest.raises(NotReal):
        real_basis(s)


def test_real_basis_fixtures():
    r = real_basis(GHZ)
    assert r.method == "canonical"
    assert r.imag_residual < 1e-12


def test_real_basis_ghz_family_pattern():
    for k in range(50):
        state, _ = ghz_family_state(k)
        r = real_basis(state)
        assert r.imag_residual < 1e-8
        assert r.method == "ghz"
        g = ghz_two_term(state)
        expected = half_angle_coordinates(g.alpha, g.delta, g.gamma)
        np.testing.assert_allclose(r.realAmplitudes, expected, atol=1e-8)


def test_half_angle_coordinates_oracle():
    rng = np.random.default_rng(1)
    for _ in range(20):
        alpha, delta = 0.6, rng.uniform(0, 2 * math.pi)
        gamma = rng.uniform(0.1, 1.4, 3)
        t = np.zeros((2, 2, 2), dtype=complex)
        t[0, 0, 0] = alpha
        f = [np.array([math.cos(g), math.sin(g)]) for g in gamma]
        t += alpha * np.exp(1j * delta) * np.einsum("i,j,k->ijk", *f)
        for g in gamma:
            c, s = math.cos(g / 2), math.sin(g / 2)
            w = np.exp(-1j * delta / 6) * np.array([[c, s], [-1j * s, 1j * c]])
            t = np.tensordot(w, t, axes=(1, 0))
            t = np.moveaxis(t, 0, 2)
        np.testing.assert_allclose(t, half_angle_coordinates(alpha, delta, gamma), atol=1e-14)


def test_real_six_lbps():
    d = real_six_lbps(GHZ)
    assert len(d) == 2
    d = real_six_lbps(W)
    assert len(d) == 3
    rng = np.random.default_rng(3)
    for _ in range(30):
        s = normalize(rng.standard_normal(8))
        d = real_six_lbps(s)
        assert len(d) <= 6
        assert np.max(np.abs(d.coefficients().imag)) < 1e-10
        assert fidelity(s, make_state(d.tensor())) > 1 - 1e-10
        assert all(lab in {(0, 0, 0), (0, 1, 1), (1, 0, 0), (1, 0, 1), (1, 1, 0), (1, 1, 1)}
                   for lab in d.labels)


def test_type4d_round_trip():
    for k in range(20):
        l = np.random.default_rng(k).uniform(0.2, 1, 4)
        l /= np.linalg.norm(l)
        t = np.zeros((2, 2, 2))
        t[0, 0, 1], t[0, 1, 0], t[1, 0, 0], t[1, 1, 1] = l
        state = apply_local(normalize(t.ravel()), *random_local_triple(k))
        f = type4d_form(state)
        assert f.formula_residual < 1e-8
        assert f.offdiagonal < 1e-8
        assert np.all(f.l >= 0)
        assert fidelity(state, make_state(f.decomposition().tensor())) > 1 - 1e-8
        # X on any two parties maps the pattern onto itself, permuting l in pairs
        klein = ((0, 1, 2, 3), (1, 0, 3, 2), (2, 3, 0, 1), (3, 2, 1, 0))
        assert any(np.allclose(f.l, l[list(p)], atol=1e-8) for p in klein)


def test_type4d_half_angle_example():
    # gamma = pi/2 everywhere and delta = 0: the four l's all equal cos^3(pi/4) up to scale
    t = np.zeros((2, 2, 2), dtype=complex)
    t[0, 0, 0] = t[1, 1, 1] = 1
    state = normalize(t.ravel())
    f = type4d_form(state, check_class=False)
    expected = half_angle_l([math.pi / 2] * 3, 0.0)
    np.testing.assert_allclose(expected, [math.cos(math.pi / 4) ** 3] * 4, atol=1e-15)
    np.testing.assert_allclose(f.l / np.linalg.norm(f.l), expected / np.linalg.norm(expected),
                               atol=1e-8)
    assert fidelity(state, make_state(f.decomposition().tensor())) > 1 - 1e-12


def test_type4d_rejects_other_types():
    with pytest.raises(NotType4d):
        type4d_form(GHZ)
    with pytest.raises(NotType4d):
        type4d_form(W)
