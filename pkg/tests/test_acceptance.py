"""Acceptance criteria, each reported as a single PASS/FAIL line."""
import math

import numpy as np
import pytest

from triqubit.canonical import acin_canonical, closest_product_state, symmetric_form
from triqubit.classification import classify, is_real, minimal_decomposition, real_basis
from triqubit.classification import reality_residuals
from triqubit.ensembles import ghz_family_state, real_phase_state, type_suite
from triqubit.errors import DegenerateDenominator, NotReal
from triqubit.fourqubit import EXCLUDED, reduce_to_twelve
from triqubit.invariants import (
    J_from_canonical, check_identities, compute_I, compute_J, delta_J, delta_j_values,
    grassl_I6, i_values, j_from_i, recover_parameters,
)
from triqubit.state import (
    GHZ, PRODUCT, W, apply_local, fidelity, haar_random_state, haar_random_states,
    make_state, random_local_triple,
)


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\nACCEPTANCE {number}: {'PASS' if ok else 'FAIL'} ({detail})")
        assert ok, detail
    return emit


def test_1_bounds(report):
    x = haar_random_states(100_000, seed=101)
    i = i_values(x)
    j = j_from_i(i)
    ledger = check_identities(j, delta_j_values(j), i, tol=1e-9)
    bad = {k: int(np.sum(~v)) for k, v in ledger.items() if not np.all(v)}
    report(1, not bad, f"100000 states, {len(ledger)} identities, violations {bad or 0}")


def test_2_invariance(report):
    worst_inv = worst_can = 0.0
    for k in range(10_000):
        s = haar_random_state([202, k])
        t = apply_local(s, *random_local_triple([203, k]))
        ia, ib = compute_I(s), compute_I(t)
        ja, jb = compute_J(ia), compute_J(ib)
        worst_inv = max(worst_inv, np.max(np.abs(np.subtract(ia, ib))),
                        np.max(np.abs(np.subtract(ja, jb))), abs(delta_J(ja) - delta_J(jb)))
        ca, cb = acin_canonical(s), acin_canonical(t)
        worst_can = max(worst_can, np.max(np.abs(ca.lambdas - cb.lambdas)), abs(ca.phi - cb.phi))
    ok = worst_inv < 1e-9 and worst_can < 1e-8
    report(2, ok, f"10000 pairs, invariants {worst_inv:.1e}, canonical {worst_can:.1e}")


def test_3_cross_check(report):
    worst = 0.0
    for k in range(10_000):
        s = haar_random_state([303, k])
        a = J_from_canonical(acin_canonical(s))
        b = compute_J(compute_I(s))
        worst = max(worst, float(np.max(np.abs(np.subtract(a, b)))))
    report(3, worst < 1e-9, f"10000 states, max |dJ| {worst:.1e}")


def test_4_recovery(report):
    worst = 0.0
    wrong = flagged = coincident = 0
    for k in range(1000):
        s = haar_random_state([404, k])
        cf = acin_canonical(s)
        try:
            r = recover_parameters(compute_J(compute_I(s)), grassl_I6(cf))
        except DegenerateDenominator:
            flagged += 1
            continue
        target = np.append(cf.mu, math.cos(cf.phi))
        errs = [np.max(np.abs(np.append(b.mu, b.cos_phi) - target)) for b in r.branches]
        if r.reason == "coincident":
            coincident += 1
            worst = max(worst, min(errs))
            continue
        worst = max(worst, errs[r.selected])
        wrong += int(errs[r.selected] > 1e-7)
    ok = worst < 1e-7 and wrong == 0
    report(4, ok, f"1000 states, max err {worst:.1e}, wrong branch {wrong}, "
                  f"coincident {coincident}, degenerate {flagged}")


def test_5_fixtures(report):
    tol = 1e-10
    ig, iw, ip = compute_I(GHZ), compute_I(W), compute_I(PRODUCT)
    jg, jw, jp = compute_J(ig), compute_J(iw), compute_J(ip)
    checks = {
        "GHZ I5": abs(ig[4] - 1 / 16) < tol,
        "GHZ J4": abs(jg[3] - 0.25) < tol,
        "GHZ class": classify(GHZ).tag == "T2b" and classify(GHZ).nu == 2,
        "W J": np.allclose(jw, (1 / 9, 1 / 9, 1 / 9, 0, 2 / 27), atol=tol, rtol=0),
        "W deltaJ": abs(delta_J(jw)) < tol,
        "W class": classify(W).tag == "T3a" and classify(W).nu == 3,
        "product J": np.allclose(jp, 0, atol=tol) and abs(ip[4]) < tol,
        "product class": classify(PRODUCT).tag == "T1",
    }
    failed = [k for k, v in checks.items() if not v]
    report(5, not failed, f"{len(checks)} fixture checks, failed {failed or 'none'}")


def test_6_classification(report):
    suite = type_suite(per_type=3, seed=606)
    wrong, worst = [], 0.0
    for key, s in suite:
        cls = classify(s, 1e-8)
        got = cls.tag + (f":{cls.party}" if cls.party else "")
        dec = minimal_decomposition(s, cls, 1e-8)
        if got != key or len(dec) != cls.nu:
            wrong.append(key)
        worst = max(worst, 1 - fidelity(s, make_state(dec.tensor())))
    ok = not wrong and worst < 1e-8
    report(6, ok, f"{len(suite)} states, misclassified {wrong or 0}, max infidelity {worst:.1e}")


def test_7_reality(report):
    worst = 0.0
    for k in range(1000):
        worst = max(worst, real_basis(ghz_family_state([707, k])[0]).imag_residual)
        worst = max(worst, real_basis(real_phase_state([708, k])).imag_residual)
    # generic: Haar states clearing the 1e-4 margin on both residuals
    generic, drawn, bad = 0, 0, 0
    while generic < 1000:
        s = haar_random_state([709, drawn])
        drawn += 1
        if min(reality_residuals(s)) <= 1e-4:
            continue
        generic += 1
        if abs(grassl_I6(acin_canonical(s)).imag) <= 1e-12 or is_real(s).isReal:
            bad += 1
            continue
        try:
            real_basis(s)
            bad += 1
        except NotReal:
            pass
    ok = worst < 1e-8 and bad == 0
    report(7, ok, f"2000 real states max|Im| {worst:.1e}; 1000 generic of {drawn} drawn, "
                  f"inconsistent {bad}")


def test_8_symmetric(report):
    worst = 0.0
    for k in range(1000):
        s = haar_random_state([808, k])
        f = symmetric_form(s)
        # recompute the three coefficients from the stored gauge
        form = f.gauge.forward(s.tensor)
        worst = max(worst, abs(form[1, 1, 0]), abs(form[1, 0, 1]), abs(form[0, 1, 1]))
    # oracles: symmetric-product grid for GHZ, 3 cos^4 sin^2 scan for W
    t = np.linspace(0, math.pi / 2, 200_001)
    w_oracle = float(np.max(3 * np.cos(t) ** 4 * np.sin(t) ** 2))
    g = np.linspace(0, math.pi / 2, 2001)
    ghz_oracle = float(np.max((np.cos(g) ** 3 + np.sin(g) ** 3) ** 2 / 2))
    dg = abs(closest_product_state(GHZ).overlap - ghz_oracle)
    dw = abs(closest_product_state(W).overlap - w_oracle)
    ok = worst < 1e-8 and dg < 1e-6 and dw < 1e-6 and abs(ghz_oracle - 0.5) < 1e-6 \
        and abs(w_oracle - 4 / 9) < 1e-6
    report(8, ok, f"1000 states max residual {worst:.1e}; GHZ {dg:.1e}, W {dw:.1e} from oracles")


def test_9_four_qubit(report):
    worst_ex = worst_fid = 0.0
    bad_count = 0
    for k in range(1000):
        s = haar_random_state([909, k], n=4)
        f = reduce_to_twelve(s)
        form = f.gauge.forward(s.tensor)
        worst_ex = max(worst_ex, max(abs(form[slot]) for slot in EXCLUDED))
        worst_fid = max(worst_fid, 1 - fidelity(s, f.reconstruct()))
        n_real = int(np.sum(np.abs(f.coefficients.imag) < 1e-12))
        bad_count += int(n_real != 5 or 2 * 12 - n_real != 19)
    ok = worst_ex < 1e-8 and worst_fid < 1e-8 and bad_count == 0
    report(9, ok, f"1000 states, excluded {worst_ex:.1e}, infidelity {worst_fid:.1e}, "
                  f"wrong real count {bad_count}")
