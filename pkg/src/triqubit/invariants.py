"""Polynomial local-unitary invariants of three-qubit states.

``I1..I5`` are purities, the Kempe-type invariant ``I4`` and the squared
hyperdeterminant; ``J1..J5`` are the linear recombinations that read off
the canonical coefficients directly; ``I6`` is Grassl's complex invariant
which separates a state from its complex conjugate.

Array helpers (``i_values``, ``j_values``) accept any leading batch shape,
which the ensemble sweeps rely on.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .canonical import CanonicalForm, acin_canonical
from .errors import DegenerateDenominator, RangeViolation
from .linalg import cayley_hdet
from .state import PureState3

EPS_ZERO = 1e-9
RANGE_TOL = 1e-9
IMPLICATION_TOL = 1e-6


def hyperdeterminant(state: PureState3) -> complex:
    return complex(cayley_hdet(state.tensor))


def _as_tensor(states) -> np.ndarray:
    if isinstance(states, PureState3):
        return states.tensor
    arr = np.asarray(states, dtype=complex)
    return arr.reshape(arr.shape[:-1] + (2, 2, 2)) if arr.shape[-3:] != (2, 2, 2) else arr


def i_values(states) -> np.ndarray:
    """``(I1, I2, I3, I4, I5)`` along the last axis."""
    t = _as_tensor(states)
    batch = t.shape[:-3]
    tA = t.reshape(batch + (2, 4))
    rho_a = tA @ np.swapaxes(tA.conj(), -1, -2)
    tB = np.swapaxes(t, -3, -2).reshape(batch + (2, 4))
    rho_b = tB @ np.swapaxes(tB.conj(), -1, -2)
    tC = np.moveaxis(t, -1, -3).reshape(batch + (2, 4))
    rho_c = tC @ np.swapaxes(tC.conj(), -1, -2)
    tAB = t.reshape(batch + (4, 2))
    rho_ab = tAB @ np.swapaxes(tAB.conj(), -1, -2)

    def purity(r):
        return np.real(np.einsum("...ij,...ji->...", r, r))

    kron = np.einsum("...ac,...bd->...abcd", rho_a, rho_b).reshape(batch + (4, 4))
    i4 = np.real(np.einsum("...ij,...ji->...", kron, rho_ab))
    i5 = np.abs(cayley_hdet(t)) ** 2
    return np.stack([purity(rho_a), purity(rho_b), purity(rho_c), i4, i5], axis=-1)


def j_from_i(i: np.ndarray) -> np.ndarray:
    i = np.asarray(i, dtype=float)
    i1, i2, i3, i4, i5 = np.moveaxis(i, -1, 0)
    r = np.sqrt(np.maximum(i5, 0.0))
    return np.stack([
        0.25 * (1 + i1 - i2 - i3 - 2 * r),
        0.25 * (1 - i1 + i2 - i3 - 2 * r),
        0.25 * (1 - i1 - i2 + i3 - 2 * r),
        r,
        0.25 * (3 - 3 * i1 - 3 * i2 - i3 + 4 * i4 - 2 * r),
    ], axis=-1)


def j_values(states) -> np.ndarray:
    """``(J1..J5)`` straight from amplitudes; ``J4`` taken as ``|Hdet|``."""
    j = j_from_i(i_values(states))
    j[..., 3] = np.abs(cayley_hdet(_as_tensor(states)))
    return j


def delta_j_values(j: np.ndarray) -> np.ndarray:
    j1, j2, j3, j4, j5 = np.moveaxis(np.asarray(j, dtype=float), -1, 0)
    return (j4 + j5) ** 2 - 4 * (j1 + j4) * (j2 + j4) * (j3 + j4)


I_BOUNDS = ((0.5, 1.0), (0.5, 1.0), (0.5, 1.0), (0.25, 1.0), (0.0, 1 / 16))
J_BOUNDS = ((0.0, 0.25), (0.0, 0.25), (0.0, 0.25), (0.0, 0.25), (-1 / 108, 2 / 27))


def compute_I(state: PureState3) -> tuple:
    return tuple(float(x) for x in i_values(state))


def compute_J(i, tol: float = RANGE_TOL) -> tuple:
    """``J1..J5`` from ``I1..I5``.

    Raises
    ------
    RangeViolation
        If an ``I`` lies outside its admissible range by more than ``tol``.
    """
    i = np.asarray(i, dtype=float)
    for k, (lo, hi) in enumerate(I_BOUNDS):
        if not lo - tol <= i[k] <= hi + tol:
            raise RangeViolation(f"I{k + 1} = {i[k]!r} outside [{lo}, {hi}]")
    return tuple(float(x) for x in j_from_i(i))


def J_from_canonical(cf: CanonicalForm) -> tuple:
    l0, l1, l2, l3, l4 = cf.lambdas
    m0, m1, m2, m3, m4 = cf.mu
    j1 = abs(l1 * l4 * np.exp(1j * cf.phi) - l2 * l3) ** 2
    return (float(j1), float(m0 * m2), float(m0 * m3), float(m0 * m4),
            float(m0 * (j1 + m2 * m3 - m1 * m4)))


def delta_J(j) -> float:
    return float(delta_j_values(np.asarray(j, dtype=float)))


def i6_from_parameters(lambdas, phi: float) -> complex:
    l0, l1, l2, l3, l4 = lambdas
    m0, m1 = l0 * l0, l1 * l1
    inner = l4 * (1 - 2 * (m0 + m1)) + 2 * l1 * l2 * l3 * np.exp(-1j * phi)
    return complex(m0 * m0 * l4 * l4 * inner**2)


def grassl_I6(cf: CanonicalForm) -> complex:
    return i6_from_parameters(cf.lambdas, cf.phi)


@dataclass(frozen=True)
class InvariantSet:
    I: tuple
    I6: complex
    J: tuple
    deltaJ: float

    @property
    def I1(self):
        return self.I[0]

    @property
    def I5(self):
        return self.I[4]

    @property
    def J4(self):
        return self.J[3]

    @property
    def J5(self):
        return self.J[4]


def invariant_set(state: PureState3, cf: CanonicalForm | None = None) -> InvariantSet:
    i = compute_I(state)
    j = tuple(float(x) for x in j_values(state))
    cf = cf if cf is not None else acin_canonical(state)
    return InvariantSet(i, grassl_I6(cf), j, delta_J(j))


@dataclass(frozen=True)
class Branch:
    mu: tuple
    cos_phi: float

    @property
    def lambdas(self) -> np.ndarray:
        return np.sqrt(np.maximum(np.array(self.mu), 0.0))

    @property
    def phi(self) -> float:
        return math.acos(max(-1.0, min(1.0, self.cos_phi)))


@dataclass(frozen=True)
class RecoveredParameters:
    branches: tuple      # (plus, minus)
    selected: int
    reason: str          # "I6-sign" | "I6-distance" | "coincident"

    @property
    def best(self) -> Branch:
        return self.branches[self.selected]


def _branch(j, sign: int, delta: float) -> Branch:
    j1, j2, j3, j4, j5 = j
    mu0 = (j4 + j5 + sign * math.sqrt(max(delta, 0.0))) / (2 * (j1 + j4))
    mu2, mu3, mu4 = j2 / mu0, j3 / mu0, j4 / mu0
    mu1 = 1 - mu0 - (j2 + j3 + j4) / mu0
    lam = np.sqrt(np.maximum([mu0, mu1, mu2, mu3, mu4], 0.0))
    denom = 2 * lam[1] * lam[2] * lam[3] * lam[4]
    # phi is irrelevant when any factor vanishes; report phi = 0
    cos_phi = (mu1 * mu4 + mu2 * mu3 - j1) / denom if denom > 1e-12 else 1.0
    return Branch((mu0, mu1, mu2, mu3, mu4), float(cos_phi))


def recover_parameters(j, i6: complex, eps_zero: float = EPS_ZERO) -> RecoveredParameters:
    """Canonical ``mu_i`` and ``cos phi`` from ``J1..J5``, disambiguated by ``I6``.

    Raises
    ------
    DegenerateDenominator
        If ``J1 + J4 <= eps_zero``.
    """
    j = tuple(float(x) for x in j)
    if j[0] + j[3] <= eps_zero:
        raise DegenerateDenominator(f"J1 + J4 = {j[0] + j[3]:.3e}")
    delta = delta_J(j)
    plus, minus = _branch(j, +1, delta), _branch(j, -1, delta)
    if delta < eps_zero:
        return RecoveredParameters((plus, minus), 0, "coincident")
    cand = [i6_from_parameters(b.lambdas, b.phi) for b in (plus, minus)]
    target = np.sign(i6.imag) if abs(i6.imag) > 0 else 0.0
    signs = [np.sign(c.imag) for c in cand]
    matching = [k for k in range(2) if signs[k] == target]
    if target != 0 and len(matching) == 1:
        return RecoveredParameters((plus, minus), matching[0], "I6-sign")
    k = int(np.argmin([abs(c - i6) for c in cand]))
    return RecoveredParameters((plus, minus), k, "I6-distance")


def check_identities(j, delta=None, i=None, eps_zero: float = EPS_ZERO,
                     tol: float = RANGE_TOL) -> dict:
    """Pass/fail ledger for every bound and implication on the invariants.

    Works element-wise on batches: each entry of the returned dict is a
    boolean (array) that is ``True`` where the identity holds.  Implications
    with a vanishing antecedent are checked at ``max(1e-6, sqrt(eps_zero))``
    since the consequents involve square roots of the antecedents.
    """
    j = np.asarray(j, dtype=float)
    j1, j2, j3, j4, j5 = np.moveaxis(j, -1, 0)
    if delta is None:
        delta = delta_j_values(j)
    delta = np.asarray(delta, dtype=float)
    out = {}
    if i is not None:
        i = np.asarray(i, dtype=float)
        for k, (lo, hi) in enumerate(I_BOUNDS):
            out[f"I{k + 1}_range"] = (i[..., k] >= lo - tol) & (i[..., k] <= hi + tol)
    for k, (lo, hi) in enumerate(J_BOUNDS):
        out[f"J{k + 1}_range"] = (j[..., k] >= lo - tol) & (j[..., k] <= hi + tol)
    for name, s in (("J2+J3+J4", j2 + j3 + j4), ("J1+J3+J4", j1 + j3 + j4),
                    ("J1+J2+J4", j1 + j2 + j4), ("J4+J5", j4 + j5)):
        out[f"bound_{name}"] = (s >= -tol) & (s <= 0.25 + tol)
    out["deltaJ_nonneg"] = delta >= -tol
    ctol = max(IMPLICATION_TOL, math.sqrt(eps_zero))
    for k, jk in ((1, j1), (2, j2), (3, j3)):
        out[f"J{k}=0=>J5=0"] = ~(np.abs(jk) < eps_zero) | (np.abs(j5) < ctol)
    root = np.sqrt(np.maximum(j1 * j2 * j3, 0.0))
    out["J4=0=>sqrt(J1J2J3)=J5/2"] = ~(np.abs(j4) < eps_zero) | (np.abs(root - j5 / 2) < ctol)
    out["J4+J5=0=>J4=J5=0"] = ~(np.abs(j4 + j5) < eps_zero) | (
        (np.abs(j4) < ctol) & (np.abs(j5) < ctol))
    if np.ndim(out["deltaJ_nonneg"]) == 0:
        out = {k: bool(v) for k, v in out.items()}
    return out


def invariant_report(state: PureState3, eps_zero: float = EPS_ZERO) -> dict:
    inv = invariant_set(state)
    ident = check_identities(inv.J, inv.deltaJ, inv.I)
    j1, j2, j3, _, j5 = inv.J
    real1 = abs(math.sqrt(max(j1 * j2 * j3, 0.0)) - abs(j5) / 2) < eps_zero
    real2 = abs(inv.deltaJ) < eps_zero
    return {
        "I": list(inv.I),
        "I6": [inv.I6.real, inv.I6.imag],
        "J": list(inv.J),
        "deltaJ": inv.deltaJ,
        "identities": ident,
        # sign(Im I6) cannot separate the orbit from its conjugate here
        "conjugation_ambiguous": bool(abs(inv.I6.imag) < eps_zero and not (real1 or real2)),
    }
