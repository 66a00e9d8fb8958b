"""Minimal local-basis decompositions and the reality test.

Every three-qubit state gets a type whose digit is the minimal number of
local-basis product states needed to write it.  The conditions are exact
zero conditions on the invariants ``J1..J5`` and ``Delta_J``; they are
evaluated as absolute residuals against a single tolerance ``eps``.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np

from .canonical import (
    EPS_ZERO, GhzDecomposition, acin_canonical, ghz_two_term,
)
from .decomposition import ProductDecomposition
from .errors import ClassMismatch, GhzFormRequired, NotReal, NotType4d
from .invariants import delta_j_values, j_values
from .linalg import absorb_phases, basis_to_unitary, svd2
from .state import GaugeRecord, PureState3, _apply, reduced

DEFAULT_EPS = 1e-8
PARTY_NAMES = ("A", "B", "C")
PRECEDENCE = ("T1", "T2a", "T2b", "T3a", "T3b", "T4a", "T4b", "T4c", "T4d", "GENERIC5")
NU = {"T1": 1, "T2a": 2, "T2b": 2, "T3a": 3, "T3b": 3,
      "T4a": 4, "T4b": 4, "T4c": 4, "T4d": 4, "GENERIC5": 5}
PARTY_TYPES = {"T2a", "T3b", "T4b", "T4c"}
TYPE4D_SLOTS = ((0, 0, 1), (0, 1, 0), (1, 0, 0), (1, 1, 1))


def default_eps() -> float:
    """Classification tolerance, overridable through ``TRIQUBIT_EPSILON``."""
    value = os.environ.get("TRIQUBIT_EPSILON")
    return float(value) if value else DEFAULT_EPS


@dataclass(frozen=True)
class EntanglementClass:
    tag: str
    nu: int
    party: str | None = None
    conditions: dict = field(default_factory=dict)
    notes: tuple = ()

    @property
    def label(self) -> str:
        """Short type name: ``"2b"``, ``"4c"``, ``"5"``."""
        return "5" if self.tag == "GENERIC5" else self.tag[1:]

    def to_json(self) -> dict:
        return {"type": self.label, "nu": self.nu, "party": self.party,
                "conditions": {k: float(v) for k, v in self.conditions.items()},
                "notes": list(self.notes)}


def _sqrt_j123(j) -> float:
    return math.sqrt(max(j[0] * j[1] * j[2], 0.0))


def condition_residuals(j, delta: float, purities=None) -> dict:
    """Residual of every type condition; a condition holds when its residual <= eps.

    Keys look like ``"T3b:C"`` for party-dependent types.
    """
    j1, j2, j3, j4, j5 = (float(x) for x in j)
    js = (j1, j2, j3)
    root = _sqrt_j123(j)
    pair_sum = j1 * j2 + j1 * j3 + j2 * j3
    res = {"T1": max(abs(x) for x in j)}
    for p, name in enumerate(PARTY_NAMES):
        others = [abs(j[k]) for k in range(5) if k != p]
        r = max(others)
        if purities is not None:
            r = max(r, 1.0 - purities[p])
        res[f"T2a:{name}"] = r
    res["T2b"] = max(abs(j1), abs(j2), abs(j3), abs(j5))
    res["T3a"] = max(abs(j4), abs(pair_sum - root), abs(root - j5 / 2))
    for p, name in enumerate(PARTY_NAMES):
        others = [abs(js[k]) for k in range(3) if k != p]
        res[f"T3b:{name}"] = max(others + [abs(j5)])
    res["T4a"] = max(abs(j4), abs(root - j5 / 2))
    for p, name in enumerate(PARTY_NAMES):
        res[f"T4b:{name}"] = max(abs(js[p]), abs(j5))
    for p, name in enumerate(PARTY_NAMES):
        res[f"T4c:{name}"] = max(abs(js[p] * j4 + pair_sum - root), abs(root - j5 / 2))
    res["T4d"] = max(abs(delta), abs(root - abs(j5) / 2))
    return res


def classify(state: PureState3, eps: float | None = None) -> EntanglementClass:
    """Type with the smallest number of product terms whose conditions hold.

    Ties inside one level follow the order 2a, 2b / 3a, 3b / 4a, 4b, 4c, 4d,
    and parties A, B, C.
    """
    eps = default_eps() if eps is None else eps
    j = j_values(state)
    delta = float(delta_j_values(j))
    purities = [float(np.real(np.trace(reduced(state, p).rho @ reduced(state, p).rho)))
                for p in PARTY_NAMES]
    res = condition_residuals(j, delta, purities)
    notes = []
    # J4 = 0 alone should imply the second 4a condition
    if abs(j[3]) <= eps and abs(_sqrt_j123(j) - j[4] / 2) > eps:
        notes.append("T4a conditions disagree")
    for key, r in res.items():
        if r <= eps:
            tag, _, party = key.partition(":")
            return EntanglementClass(tag, NU[tag], party or None, res, tuple(notes))
    return EntanglementClass("GENERIC5", 5, None, res, tuple(notes))


def nu(state: PureState3, eps: float | None = None) -> int:
    return classify(state, eps).nu


@dataclass(frozen=True, eq=False)
class RealBasisResult:
    isReal: bool
    witness: str | None
    gauge: GaugeRecord | None = None
    realAmplitudes: np.ndarray | None = None
    imag_residual: float = float("nan")
    method: str | None = None
    residuals: tuple = ()

    def to_json(self) -> dict:
        out = {"isReal": self.isReal, "witness": self.witness}
        if self.realAmplitudes is not None:
            out["method"] = self.method
            out["amplitudes"] = [float(x) for x in self.realAmplitudes.ravel()]
            out["imagResidual"] = float(self.imag_residual)
        return out


def reality_residuals(state: PureState3) -> tuple[float, float]:
    """``(|sqrt(J1 J2 J3) - |J5|/2|, |Delta_J|)``; either vanishing means a real state."""
    j = j_values(state)
    return abs(_sqrt_j123(j) - abs(j[4]) / 2), abs(float(delta_j_values(j)))


def is_real(state: PureState3, eps: float | None = None) -> RealBasisResult:
    eps = default_eps() if eps is None else eps
    r1, r2 = reality_residuals(state)
    ok1, ok2 = r1 <= eps, r2 <= eps
    witness = "both" if ok1 and ok2 else "sqrtJ" if ok1 else "deltaJ" if ok2 else None
    return RealBasisResult(ok1 or ok2, witness, residuals=(r1, r2))


def half_angle_unitaries(gamma, delta: float) -> tuple:
    """Per-party changes of basis that make ``|000> + e^{i delta}|f1 f2 f3>`` real."""
    out = []
    for g in gamma:
        c, s = math.cos(g / 2), math.sin(g / 2)
        out.append(np.exp(-1j * delta / 6) * np.array([[c, s], [-1j * s, 1j * c]]))
    return tuple(out)


def half_angle_coordinates(alpha: float, delta: float, gamma) -> np.ndarray:
    """Real coordinates of ``alpha(|000> + e^{i delta}|f1 f2 f3>)`` after the half-angle bases."""
    cs = [(math.cos(g / 2), math.sin(g / 2)) for g in gamma]
    by_weight = (math.cos(delta / 2), -math.sin(delta / 2), -math.cos(delta / 2),
                 math.sin(delta / 2))
    t = np.zeros((2, 2, 2))
    for idx in np.ndindex(2, 2, 2):
        prod = np.prod([cs[p][b] for p, b in enumerate(idx)])
        t[idx] = 2 * alpha * prod * by_weight[sum(idx)]
    return t


def _ghz_real_gauge(g: GhzDecomposition) -> GaugeRecord:
    return g.gauge.then(GaugeRecord(half_angle_unitaries(g.gamma, g.delta)))


def real_basis(state: PureState3, eps: float | None = None) -> RealBasisResult:
    """Local bases in which every coordinate of a real state is real.

    With ``sqrt(J1 J2 J3) = |J5|/2`` the canonical basis already works.  With
    ``Delta_J = 0`` the two-term form is rotated by the half-angle bases.
    When both apply, the candidate with the smaller imaginary residue wins.

    Raises
    ------
    NotReal
        If neither condition holds.
    GhzFormRequired
        If only ``Delta_J = 0`` holds but the three-tangle vanishes.
    """
    decision = is_real(state, eps)
    if not decision.isReal:
        raise NotReal(f"reality residuals {decision.residuals}")
    t = np.asarray(state.tensor)
    options = []
    if decision.witness in ("sqrtJ", "both"):
        options.append(("canonical", acin_canonical(state).gauge))
    if decision.witness in ("deltaJ", "both"):
        if abs(complex(np.asarray(j_values(state))[3])) > EPS_ZERO:
            options.append(("ghz", _ghz_real_gauge(ghz_two_term(state))))
        elif decision.witness == "deltaJ":
            raise GhzFormRequired("Delta_J = 0 but J4 vanishes")
    best = None
    for method, gauge in options:
        amps = gauge.forward(t)
        imag = float(np.max(np.abs(amps.imag)))
        if best is None or imag < best.imag_residual:
            best = RealBasisResult(True, decision.witness, gauge, amps.real.copy(), imag, method,
                                   decision.residuals)
    return best


def real_six_lbps(state: PureState3, eps: float | None = None,
                  tol: float = 1e-12) -> ProductDecomposition:
    """Real-coefficient decomposition on ``{000, 011, 100, 101, 110, 111}``.

    Starts from a real basis and diagonalises the ``A = 0`` slice with two
    orthogonal matrices.  Vanishing terms are dropped.
    """
    rb = real_basis(state, eps)
    t0 = rb.realAmplitudes[0]
    u, _, vt = np.linalg.svd(t0)
    step = GaugeRecord((np.eye(2), u.T, vt))
    gauge = rb.gauge.then(step)
    form = gauge.forward(np.asarray(state.tensor))
    slots = ((0, 0, 0), (0, 1, 1), (1, 0, 0), (1, 0, 1), (1, 1, 0), (1, 1, 1))
    keep = [s for s in slots if abs(form[s]) > tol]
    return ProductDecomposition.from_form(form, gauge, keep, kind="real6")


@dataclass(frozen=True, eq=False)
class Type4dForm:
    """``l1|001> + l2|010> + l3|100> + l4|111>`` with non-negative ``l``."""

    l: np.ndarray
    gauge: GaugeRecord
    formula_residual: float = 0.0
    offdiagonal: float = 0.0

    def form_tensor(self) -> np.ndarray:
        t = np.zeros((2, 2, 2), dtype=complex)
        for slot, value in zip(TYPE4D_SLOTS, self.l):
            t[slot] = value
        return t

    def decomposition(self) -> ProductDecomposition:
        return ProductDecomposition.from_form(self.form_tensor(), self.gauge, TYPE4D_SLOTS,
                                              kind="type4d")

    def to_json(self) -> dict:
        return {"type": "type4d", "l": [float(x) for x in self.l],
                "gauge": self.gauge.to_json()}


def half_angle_l(gamma, delta: float) -> np.ndarray:
    """Expected ``(l1..l4)`` up to normalisation for ``delta`` equal to 0 or pi."""
    (c1, s1), (c2, s2), (c3, s3) = [(math.cos(g / 2), math.sin(g / 2)) for g in gamma]
    if math.cos(delta) > 0:
        return np.array([s1 * s2 * c3, s1 * c2 * s3, c1 * s2 * s3, c1 * c2 * c3])
    return np.array([c1 * c2 * s3, c1 * s2 * c3, s1 * c2 * c3, s1 * s2 * s3])


def type4d_form(state: PureState3, eps: float | None = None,
                check_class: bool = True) -> Type4dForm:
    """Four-term form of a type-4d state built from the two-term form.

    ``check_class=False`` skips the classification so the construction can be
    run on any state with ``alpha = beta`` and ``delta`` in ``{0, pi}``.

    Raises
    ------
    NotType4d
        If the state is not of type 4d, or its two-term form lacks the
        required structure.
    """
    eps = default_eps() if eps is None else eps
    if check_class:
        cls = classify(state, eps)
        if cls.tag != "T4d":
            raise NotType4d(f"state is of type {cls.label}")
    try:
        g = ghz_two_term(state)
    except Exception as exc:  # NotGhzClass
        raise NotType4d(str(exc)) from exc
    if abs(math.sin(g.delta)) > math.sqrt(eps) or abs(g.alpha - g.beta) > math.sqrt(eps):
        raise NotType4d(f"two-term form has delta={g.delta:.3e}, alpha-beta={g.alpha - g.beta:.3e}")
    gauge = _ghz_real_gauge(g)
    if math.cos(g.delta) > 0:
        flip = np.array([[0, 1], [1, 0]], dtype=complex)
        gauge = gauge.then(GaugeRecord((flip, flip, flip)))
    t = np.asarray(state.tensor)
    form = gauge.forward(t)
    diag, _ = absorb_phases(form, TYPE4D_SLOTS, tol=1e-14)
    gauge = gauge.then(GaugeRecord(tuple(np.diag(d) for d in diag)))
    form = gauge.forward(t)
    l = np.array([abs(form[s]) for s in TYPE4D_SLOTS])
    expected = half_angle_l(g.gamma, g.delta)
    formula = float(np.max(np.abs(l / np.linalg.norm(l) - expected / np.linalg.norm(expected))))
    fin = gauge.forward(t)
    off = 0.0
    for p in range(3):
        m = np.moveaxis(fin, p, 0).reshape(2, 4)
        off = max(off, abs((m @ m.conj().T)[0, 1]))
    return Type4dForm(l, gauge, formula, float(off))


def _schmidt_gauge(state: PureState3, party: int) -> GaugeRecord:
    """Bases writing a state with a product party ``p`` as two Schmidt terms."""
    t = np.asarray(state.tensor)
    m = np.moveaxis(t, party, 0).reshape(2, 4)
    gram = m @ m.conj().T
    w, v = np.linalg.eigh(gram)
    a = v[:, int(np.argmax(w))]
    us = [None, None, None]
    us[party] = basis_to_unitary(a)
    rest = [q for q in range(3) if q != party]
    block = np.moveaxis(_apply(np.moveaxis(t, party, 0), [us[party]]), 0, party)
    sub = np.take(block, 0, axis=party)
    sv = svd2(sub)
    us[rest[0]], us[rest[1]] = sv.left, sv.right
    return GaugeRecord(tuple(us))


def _candidates(state: PureState3, cls: EntanglementClass, eps: float):
    parties = list(PARTY_NAMES)
    if cls.party in parties:
        parties.remove(cls.party)
        parties.insert(0, cls.party)
    if cls.tag == "T2a":
        yield "schmidt", _schmidt_gauge(state, PARTY_NAMES.index(cls.party))
    if cls.tag == "T4d":
        f = type4d_form(state, eps, check_class=False)
        yield "type4d", f.gauge
    for p in parties:
        yield f"canonical:{p}", acin_canonical(state, p).gauge


def minimal_decomposition(state: PureState3, cls: EntanglementClass | None = None,
                          eps: float | None = None) -> ProductDecomposition:
    """Decomposition with exactly ``nu`` local-basis product terms.

    Each candidate construction for the class (canonical form with each
    party singled out, bipartite Schmidt form for 2a, the half-angle form
    for 4d) is evaluated and the one dropping the least weight is kept.

    Raises
    ------
    ClassMismatch
        If every construction leaves more than ``1e4 * eps`` of squared
        weight outside ``nu`` terms.
    """
    eps = default_eps() if eps is None else eps
    cls = cls if cls is not None else classify(state, eps)
    t = np.asarray(state.tensor)
    best = None
    for name, gauge in _candidates(state, cls, eps):
        form = gauge.forward(t)
        order = sorted(np.ndindex(2, 2, 2), key=lambda s: -abs(form[s]))
        keep = sorted(order[:cls.nu])
        leak = float(sum(abs(form[s]) ** 2 for s in order[cls.nu:]))
        if best is None or leak < best[0] - 1e-15:
            best = (leak, name, gauge, keep, form)
        if leak <= 1e-20:
            break
    leak, name, gauge, keep, form = best
    if leak > 1e4 * eps:
        raise ClassMismatch(f"{cls.label}: {leak:.3e} of the weight lies outside {cls.nu} terms")
    return ProductDecomposition.from_form(form, gauge, keep, kind=name)
