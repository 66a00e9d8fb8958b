"""Canonical decompositions of three-qubit pure states.

The main entry point is :func:`acin_canonical`, which writes any state as

    l0|000> + l1 e^{i phi}|100> + l2|101> + l3|110> + l4|111>

with non-negative ``l`` and ``0 <= phi <= pi``.  The remaining functions
build the weakly asymmetric five-term form, the symmetric form around the
closest product state, and the two-term (GHZ-class) form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .decomposition import ProductDecomposition
from .errors import NonConvergence, NotGhzClass, ResidualTooLarge
from .linalg import (
    absorb_phases, basis_to_unitary, cayley_hdet, complement, hermitian_eig2,
    quadratic_roots, svd2, unitary_with_first_row,
)
from .state import (
    GaugeRecord, MatrixSlicePair, PureState3, _apply, make_state, slices,
)

EPS_ZERO = 1e-9
SIN_TIE = 1e-9
LAMBDA_ZERO = 1e-12

CANONICAL_SLOTS = ((0, 0, 0), (1, 0, 0), (1, 0, 1), (1, 1, 0), (1, 1, 1))
# lambda0 first, then lambda4, lambda2, lambda3; lambda1 keeps the leftover phase
_CANONICAL_PHASE_ORDER = ((0, 0, 0), (1, 1, 1), (1, 0, 1), (1, 1, 0), (1, 0, 0))
WEAK_SLOTS = ((0, 0, 0), (0, 0, 1), (1, 0, 0), (1, 1, 0), (1, 1, 1))
SYMMETRIC_SLOTS = ((0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0), (1, 1, 1))

_PARTY_PERMS = {"A": (0, 1, 2), "B": (1, 0, 2), "C": (2, 1, 0)}


class PencilRoots(NamedTuple):
    roots: list
    degeneracy: str


@dataclass(frozen=True, eq=False)
class CanonicalForm:
    lambdas: np.ndarray
    phi: float
    gauge: GaugeRecord
    root: np.ndarray = field(default=None, repr=False)
    degeneracy: str = "distinct"
    party: str = "A"
    residual: float = 0.0

    @property
    def mu(self) -> np.ndarray:
        return self.lambdas**2

    def form_tensor(self) -> np.ndarray:
        t = np.zeros((2, 2, 2), dtype=complex)
        l0, l1, l2, l3, l4 = self.lambdas
        t[0, 0, 0] = l0
        t[1, 0, 0] = l1 * np.exp(1j * self.phi)
        t[1, 0, 1] = l2
        t[1, 1, 0] = l3
        t[1, 1, 1] = l4
        return t

    def decomposition(self, tol: float = 0.0) -> ProductDecomposition:
        form = self.form_tensor()
        slots = [s for s in CANONICAL_SLOTS if abs(form[s]) > tol]
        return ProductDecomposition.from_form(form, self.gauge, slots, kind="canonical")

    def to_json(self) -> dict:
        return {"type": "canonical", "lambda": [float(x) for x in self.lambdas],
                "phi": float(self.phi), "party": self.party,
                "gauge": self.gauge.to_json()}


@dataclass(frozen=True, eq=False)
class WeakAsymmetricForm:
    eta: np.ndarray
    phi: float
    gauge: GaugeRecord
    degenerate: bool = False

    def form_tensor(self) -> np.ndarray:
        t = np.zeros((2, 2, 2), dtype=complex)
        for slot, value in zip(WEAK_SLOTS, self.eta):
            t[slot] = value
        t[0, 0, 0] *= np.exp(1j * self.phi)
        return t

    def decomposition(self, tol: float = 0.0) -> ProductDecomposition:
        form = self.form_tensor()
        slots = [s for s in WEAK_SLOTS if abs(form[s]) > tol]
        return ProductDecomposition.from_form(form, self.gauge, slots, kind="weak")

    def to_json(self) -> dict:
        return {"type": "weak", "eta": [float(x) for x in self.eta], "phi": float(self.phi),
                "degenerate": self.degenerate, "gauge": self.gauge.to_json()}


@dataclass(frozen=True, eq=False)
class SymmetricForm:
    kappa: np.ndarray
    theta: float
    gauge: GaugeRecord
    residual: float
    overlap: float

    def form_tensor(self) -> np.ndarray:
        t = np.zeros((2, 2, 2), dtype=complex)
        for slot, value in zip(SYMMETRIC_SLOTS, self.kappa):
            t[slot] = value
        t[0, 0, 0] *= np.exp(1j * self.theta)
        return t

    def decomposition(self, tol: float = 0.0) -> ProductDecomposition:
        form = self.form_tensor()
        slots = [s for s in SYMMETRIC_SLOTS if abs(form[s]) > tol]
        return ProductDecomposition.from_form(form, self.gauge, slots, kind="symmetric")

    def to_json(self) -> dict:
        return {"type": "symmetric", "kappa": [float(x) for x in self.kappa],
                "theta": float(self.theta), "residual": float(self.residual),
                "overlap": float(self.overlap), "gauge": self.gauge.to_json()}


@dataclass(frozen=True, eq=False)
class GhzDecomposition:
    """``alpha|000> + beta e^{i delta}|f1 f2 f3>`` with ``|fi> = (cos gi, sin gi)``."""

    alpha: float
    beta: float
    delta: float
    gamma: np.ndarray
    gauge: GaugeRecord

    def product_vectors(self) -> list:
        return [np.array([math.cos(g), math.sin(g)], dtype=complex) for g in self.gamma]

    def form_tensor(self) -> np.ndarray:
        t = np.zeros((2, 2, 2), dtype=complex)
        t[0, 0, 0] = self.alpha
        f1, f2, f3 = self.product_vectors()
        t += self.beta * np.exp(1j * self.delta) * np.einsum("i,j,k->ijk", f1, f2, f3)
        return t

    def overlap(self) -> float:
        """``<000|f1 f2 f3>``, the overlap of the two product states."""
        return float(np.prod(np.cos(self.gamma)))

    def decomposition(self) -> ProductDecomposition:
        from .decomposition import Term
        inv = [u.conj().T for u in self.gauge.unitaries]
        e0 = np.array([1.0, 0.0], dtype=complex)
        t1 = Term(complex(self.alpha), tuple(u @ e0 for u in inv))
        t2 = Term(complex(self.beta * np.exp(1j * self.delta)),
                  tuple(u @ f for u, f in zip(inv, self.product_vectors())))
        return ProductDecomposition((t1, t2), None, "ghz")

    def to_json(self) -> dict:
        return {"type": "ghz", "alpha": float(self.alpha), "beta": float(self.beta),
                "delta": float(self.delta), "gamma": [float(g) for g in self.gamma],
                "gauge": self.gauge.to_json()}


def _pencil_coefficients(t0: np.ndarray, t1: np.ndarray) -> tuple:
    """Coefficients of ``det(u0 T0 + u1 T1) = a u0^2 + b u0 u1 + c u1^2``."""
    a = t0[0, 0] * t0[1, 1] - t0[0, 1] * t0[1, 0]
    c = t1[0, 0] * t1[1, 1] - t1[0, 1] * t1[1, 0]
    b = t0[0, 0] * t1[1, 1] + t1[0, 0] * t0[1, 1] - t0[0, 1] * t1[1, 0] - t1[0, 1] * t0[1, 0]
    return complex(a), complex(b), complex(c)


def pencil_roots(pair: MatrixSlicePair | PureState3) -> PencilRoots:
    """Points ``(u00, u01)`` of the projective line where ``u00 T0 + u01 T1`` is singular.

    An identically singular pencil is reported with the single root ``(1, 0)``.
    """
    if isinstance(pair, PureState3):
        pair = slices(pair)
    a, b, c = _pencil_coefficients(np.asarray(pair.T0), np.asarray(pair.T1))
    res = quadratic_roots(a, b, c)
    return PencilRoots(res.roots, res.degeneracy)


def _dominant_row(t: np.ndarray) -> np.ndarray:
    """Unit ``r`` maximising ``||r0 T0 + r1 T1||``."""
    m = t.reshape(2, 4)
    gram = (m.conj() @ m.T)  # gram[i, j] = tr(T_i^dagger T_j)
    _, vecs = hermitian_eig2(gram)
    return vecs[:, 0]


class _Candidate(NamedTuple):
    lambdas: np.ndarray
    phi: float
    gauge: GaugeRecord
    root: np.ndarray
    residual: float


def _candidate(t: np.ndarray, root: np.ndarray) -> _Candidate:
    ua = unitary_with_first_row(root)
    t1 = _apply(t, [ua])
    t0p, t1p = t1[0], t1[1]
    scale = max(float(np.linalg.norm(t)), 1e-300)
    if np.linalg.norm(t0p) <= 1e-12 * scale:
        # A factorises: the whole state sits in T1'; diagonalise it with the
        # smaller singular value in the (0,0) slot
        sv = svd2(t1p)
        ub, uc = sv.left[::-1], sv.right[::-1]
    else:
        sv = svd2(t0p)
        ub, uc = sv.left, sv.right
    form = _apply(t, [ua, ub, uc])
    diag, _ = absorb_phases(form, _CANONICAL_PHASE_ORDER, tol=LAMBDA_ZERO * scale)
    us = [np.diag(d) @ u for d, u in zip(diag, (ua, ub, uc))]
    form = _apply(t, us)
    lambdas = np.array([abs(form[s]) for s in CANONICAL_SLOTS])
    phi = float(np.angle(form[1, 0, 0])) % (2 * math.pi)
    if lambdas[1] <= LAMBDA_ZERO * scale:
        phi = 0.0
    elif abs(math.sin(phi)) < SIN_TIE:
        phi = 0.0 if math.cos(phi) > 0 else math.pi
    residual = max(abs(form[0, 0, 1]), abs(form[0, 1, 0]), abs(form[0, 1, 1]))
    phases = [float(np.angle(d[1] / d[0])) for d in diag] + [float(np.angle(diag[0][0]))]
    gauge = GaugeRecord(tuple(us), tuple(phases))
    return _Candidate(lambdas, phi, gauge, root, float(residual))


def _select(cands: list[_Candidate]) -> _Candidate:
    if len(cands) == 1:
        return cands[0]
    upper = [c for c in cands if math.sin(c.phi) > SIN_TIE]
    lower = [c for c in cands if math.sin(c.phi) < -SIN_TIE]
    if len(upper) == 1:
        return upper[0]
    pool = [c for c in cands if c not in lower] or cands
    best = pool[0]
    for c in pool[1:]:
        if c.lambdas[1] < best.lambdas[1] - SIN_TIE:
            best = c
        elif abs(c.lambdas[1] - best.lambdas[1]) <= SIN_TIE and c.lambdas[0] < best.lambdas[0] - SIN_TIE:
            best = c
    return best


def _with_party(gauge: GaugeRecord, party: str) -> GaugeRecord:
    perm = _PARTY_PERMS[party]
    if perm == (0, 1, 2):
        return gauge
    return GaugeRecord(gauge.unitaries, gauge.phases, perm)


def canonical_candidates(state: PureState3, party: str = "A") -> list[CanonicalForm]:
    """One canonical-form candidate per root of the determinant pencil.

    Candidates keep their raw phase in ``[0, 2 pi)``; :func:`acin_canonical`
    picks the one with ``0 <= phi <= pi``.
    """
    perm = _PARTY_PERMS[party]
    t = np.transpose(np.asarray(state.tensor), perm)
    roots = pencil_roots(MatrixSlicePair(t[0], t[1]))
    if roots.degeneracy == "identically-singular":
        root_list = [_dominant_row(t)]
    else:
        root_list = roots.roots
    out = []
    for r in root_list:
        c = _candidate(t, r)
        out.append(CanonicalForm(c.lambdas, c.phi, _with_party(c.gauge, party), c.root,
                                 roots.degeneracy, party, c.residual))
    return out


def acin_canonical(state: PureState3, party: str = "A") -> CanonicalForm:
    """Five-term canonical form with ``party`` singled out (default A).

    Both pencil roots are evaluated.  The candidate whose phase lies in
    ``(0, pi)`` wins; if the phases sit at 0 or pi the one with the smaller
    ``lambda1`` (then smaller ``lambda0``) is kept.
    """
    perm = _PARTY_PERMS[party]
    t = np.transpose(np.asarray(state.tensor), perm)
    roots = pencil_roots(MatrixSlicePair(t[0], t[1]))
    if roots.degeneracy == "identically-singular":
        root_list = [_dominant_row(t)]
    else:
        root_list = roots.roots
    best = _select([_candidate(t, r) for r in root_list])
    return CanonicalForm(best.lambdas, best.phi, _with_party(best.gauge, party), best.root,
                         roots.degeneracy, party, best.residual)


def canonical_state(lambdas, phi: float = 0.0) -> PureState3:
    """Build the state ``l0|000> + l1 e^{i phi}|100> + l2|101> + l3|110> + l4|111>``."""
    t = np.zeros((2, 2, 2), dtype=complex)
    l0, l1, l2, l3, l4 = lambdas
    t[0, 0, 0], t[1, 0, 0], t[1, 0, 1], t[1, 1, 0], t[1, 1, 1] = (
        l0, l1 * np.exp(1j * phi), l2, l3, l4)
    return PureState3.from_tensor(t)


def weak_asymmetric(cf: CanonicalForm) -> WeakAsymmetricForm:
    """Re-express a canonical form on ``{000, 001, 100, 110, 111}``.

    When ``lambda1 = lambda2 = 0`` the third-qubit rotation is undefined and
    the canonical form is returned as is with ``degenerate=True``.
    """
    l0, l1, l2, l3, l4 = cf.lambdas
    norm2 = l1 * l1 + l2 * l2
    if norm2 <= EPS_ZERO:
        eta = np.array([l0, 0.0, 0.0, l3, l4])
        return WeakAsymmetricForm(eta, 0.0, cf.gauge, degenerate=True)
    first = np.array([l1 * np.exp(1j * cf.phi), l2]) / math.sqrt(norm2)
    uc = basis_to_unitary(first)
    eye = np.eye(2, dtype=complex)
    form = _apply(cf.form_tensor(), [eye, eye, uc])
    order = (WEAK_SLOTS[1], WEAK_SLOTS[2], WEAK_SLOTS[3], WEAK_SLOTS[4], WEAK_SLOTS[0])
    diag, _ = absorb_phases(form, order, tol=LAMBDA_ZERO)
    step = GaugeRecord((np.diag(diag[0]), np.diag(diag[1]), np.diag(diag[2]) @ uc))
    form = _apply(form, [np.diag(d) for d in diag])
    eta = np.array([abs(form[s]) for s in WEAK_SLOTS])
    phi = float(np.angle(form[0, 0, 0])) % (2 * math.pi) if eta[0] > LAMBDA_ZERO else 0.0
    return WeakAsymmetricForm(eta, phi, cf.gauge.then(step))


class ClosestProduct(NamedTuple):
    vectors: tuple
    overlap: float
    converged: bool
    iterations: int
    restart: int


def _contract(t, b, c, axis):
    if axis == 0:
        return np.einsum("ijk,rj,rk->ri", t, b.conj(), c.conj())
    if axis == 1:
        return np.einsum("ijk,ri,rk->rj", t, b.conj(), c.conj())
    return np.einsum("ijk,ri,rj->rk", t, b.conj(), c.conj())


def _unit_rows(v):
    n = np.linalg.norm(v, axis=1, keepdims=True)
    return v / np.where(n > 0, n, 1.0)


def closest_product_state(state: PureState3, restarts: int = 20, max_iters: int = 500,
                          seed: int = 0, tol: float = 1e-12,
                          strict: bool = False) -> ClosestProduct:
    """Product state ``|abc>`` maximising ``|<abc|psi>|^2`` by alternating updates.

    Restart 0 starts from the dominant eigenvectors of the one-party
    marginals; the others start from seeded random vectors.  All restarts
    run in lock step.  The best overlap wins, ties going to the lowest
    restart index.
    """
    t = np.asarray(state.tensor, dtype=complex)
    rng = np.random.default_rng(seed)
    init = rng.standard_normal((3, restarts, 2)) + 1j * rng.standard_normal((3, restarts, 2))
    for p in range(3):
        m = np.moveaxis(t, p, 0).reshape(2, 4)
        _, vecs = hermitian_eig2(m @ m.conj().T)
        init[p, 0] = vecs[:, 0]
    a, b, c = (_unit_rows(init[p]) for p in range(3))
    done = np.zeros(restarts, dtype=bool)
    iters = np.full(restarts, max_iters)
    for it in range(1, max_iters + 1):
        a_new = _unit_rows(_contract(t, b, c, 0))
        b_new = _unit_rows(_contract(t, a_new, c, 1))
        c_new = _unit_rows(_contract(t, a_new, b_new, 2))
        change = np.max(np.abs(np.stack([a_new - a, b_new - b, c_new - c])), axis=(0, 2))
        a, b, c = a_new, b_new, c_new
        newly = (change < tol) & ~done
        iters[newly] = it
        done |= newly
        if done.all():
            break
    overlaps = np.abs(np.einsum("ijk,ri,rj,rk->r", t, a.conj(), b.conj(), c.conj())) ** 2
    score = np.where(done, overlaps, -1.0) if done.any() else overlaps
    best = int(np.argmax(score))
    # a non-converged restart that found a strictly larger overlap still wins
    if overlaps.max() > overlaps[best] + 1e-12:
        best = int(np.argmax(overlaps))
    converged = bool(done[best])
    if strict and not converged:
        raise NonConvergence(f"no restart converged within {max_iters} iterations")
    return ClosestProduct((a[best], b[best], c[best]), float(overlaps[best]), converged,
                          int(iters[best]), best)


def symmetric_form(state: PureState3, restarts: int = 20, max_iters: int = 500,
                   seed: int = 0, eps_zero: float = 1e-8) -> SymmetricForm:
    """Symmetric five-term form built around the closest product state.

    Raises
    ------
    ResidualTooLarge
        If ``t110``, ``t101`` or ``t011`` fail to vanish in the rotated basis.
    """
    best = closest_product_state(state, restarts, max_iters, seed)
    # rows map the optimal vector of each party to |1>
    us = [np.array([complement(v).conj(), v.conj()]) for v in best.vectors]
    t = np.asarray(state.tensor)
    form = _apply(t, us)
    residual = max(abs(form[1, 1, 0]), abs(form[1, 0, 1]), abs(form[0, 1, 1]))
    if residual >= eps_zero:
        raise ResidualTooLarge(f"vanishing coefficients reach {residual:.3e}")
    order = (SYMMETRIC_SLOTS[4], SYMMETRIC_SLOTS[1], SYMMETRIC_SLOTS[2], SYMMETRIC_SLOTS[3],
             SYMMETRIC_SLOTS[0])
    diag, _ = absorb_phases(form, order, tol=LAMBDA_ZERO)
    us = [np.diag(d) @ u for d, u in zip(diag, us)]
    form = _apply(t, us)
    kappa = np.array([abs(form[s]) for s in SYMMETRIC_SLOTS])
    theta = float(np.angle(form[0, 0, 0])) % (2 * math.pi) if kappa[0] > LAMBDA_ZERO else 0.0
    if theta >= math.pi:
        # e^{i pi/3} on every |0>, e^{-2i pi/3} on every |1>: shifts theta by pi
        # and leaves the other four coefficients unchanged
        shift = np.diag([np.exp(1j * math.pi / 3), np.exp(-2j * math.pi / 3)])
        us = [shift @ u for u in us]
        theta = (theta + math.pi) % (2 * math.pi)
        if theta >= math.pi:
            theta = 0.0
    return SymmetricForm(kappa, theta, GaugeRecord(tuple(us)), float(residual), best.overlap)


def _align(x1: np.ndarray, x2: np.ndarray) -> tuple[np.ndarray, float, float]:
    """Unitary sending ``x1`` to ``|0>`` and ``x2`` to ``e^{i chi}(cos g, sin g)``."""
    u = basis_to_unitary(x1)
    y = u @ x2
    chi = float(np.angle(y[0])) if abs(y[0]) > 1e-12 else float(np.angle(y[1]))
    if abs(y[1]) > 1e-12:
        u = np.diag([1.0, np.exp(1j * (chi - np.angle(y[1])))]) @ u
    gamma = math.atan2(abs(y[1]), abs(y[0]))
    return u, chi, gamma


def ghz_two_term(state: PureState3, eps_zero: float = EPS_ZERO) -> GhzDecomposition:
    """Two-term decomposition ``alpha|000> + beta e^{i delta}|f1 f2 f3>``.

    The ``|000>`` term comes from the pencil root chosen by
    :func:`acin_canonical`; the other root gives the second product state.

    Raises
    ------
    NotGhzClass
        If the three-tangle ``|Hdet|`` is at most ``eps_zero``.
    """
    t = np.asarray(state.tensor, dtype=complex)
    j4 = abs(complex(cayley_hdet(t)))
    if j4 <= eps_zero:
        raise NotGhzClass(f"J4 = {j4:.3e} vanishes")
    cf = acin_canonical(state)
    roots = pencil_roots(state).roots
    r1 = cf.root
    r2 = min(roots, key=lambda r: abs(np.vdot(r1, r)))
    mtx = np.array([r1, r2])
    inv = np.linalg.inv(mtx)
    terms = []
    for r, root in enumerate((r1, r2)):
        s = root[0] * t[0] + root[1] * t[1]
        sv = svd2(s)
        xa = inv[:, r]
        coeff = np.linalg.norm(xa) * sv.values[0]
        terms.append((coeff, [xa / np.linalg.norm(xa), sv.left[0].conj(), sv.right[0].conj()]))
    (c1, v1), (c2, v2) = terms
    us, chis, gammas = [], [], []
    for p in range(3):
        u, chi, g = _align(v1[p], v2[p])
        us.append(u)
        chis.append(chi)
        gammas.append(g)
    # every u maps the first vector to |0> exactly, so only c1's phase remains
    us[0] = np.exp(-1j * np.angle(c1)) * us[0]
    coeff2 = c2 * np.exp(1j * (sum(chis) - np.angle(c1)))
    delta = float(np.angle(coeff2))
    # an orthogonal pair leaves the |1> phase of that party free: spend it on delta
    free = [p for p in range(3) if abs(math.cos(gammas[p])) < 1e-12]
    if free:
        p = free[0]
        us[p] = np.diag([1.0, np.exp(-1j * delta)]) @ us[p]
        delta = 0.0
    return GhzDecomposition(float(abs(c1)), float(abs(coeff2)), delta,
                            np.array(gammas), GaugeRecord(tuple(us)))


def reconstruct(form) -> PureState3:
    """State described by any decomposition or form, in the source frame."""
    if isinstance(form, ProductDecomposition):
        return make_state(form.tensor())
    return make_state(form.gauge.inverse(form.form_tensor()))
