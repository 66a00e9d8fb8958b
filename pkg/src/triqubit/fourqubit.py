"""Twelve-term reduction of four-qubit pure states.

A change of basis on party A makes the first three-qubit slice ``phi0'``
have vanishing hyperdeterminant.  Canonicalising that slice on B, C, D then
leaves it on the four-term pattern ``{000, 100, 101, 110}``, so the four
coordinates ``t0001, t0010, t0011, t0111`` vanish and twelve remain.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .canonical import canonical_candidates
from .linalg import absorb_phases, cayley_hdet, unitary_with_first_row
from .state import GaugeRecord, PureState3, PureState4

ZERO_PENCIL = 1e-12
EXCLUDED = ((0, 0, 0, 1), (0, 0, 1, 0), (0, 0, 1, 1), (0, 1, 1, 1))
TWELVE_SLOTS = tuple(idx for idx in np.ndindex(2, 2, 2, 2) if idx not in EXCLUDED)
PHASE_ORDER = ((0, 0, 0, 0), (0, 1, 0, 1), (0, 1, 1, 0), (0, 1, 0, 0)) + tuple(
    idx for idx in np.ndindex(2, 2, 2, 2) if idx[0] == 1)


class QuarticRoots(NamedTuple):
    roots: list              # unit homogeneous pairs (u0, u1), u0 = 0 is infinity
    coefficients: np.ndarray  # c_m of sum_m c_m x^m, x = u1/u0
    identically_zero: bool


def _pencil_quartic(t: np.ndarray) -> np.ndarray:
    """Coefficients of ``Hdet(T0 + x T1)`` from samples at the fifth roots of unity."""
    w = np.exp(2j * np.pi * np.arange(5) / 5)
    values = cayley_hdet(t[0][None] + w[:, None, None, None] * t[1][None])
    return np.fft.fft(values) / 5


def _root_key(r: np.ndarray):
    if abs(r[0]) < 1e-300:
        return (1, 0.0, 0.0)
    x = r[1] / r[0]
    return (0, round(abs(x), 12), cmath.phase(x))


def _merge_clusters(xs: np.ndarray, c: np.ndarray, tol: float = 1e-4) -> np.ndarray:
    """Replace each cluster of a multiple root by its mean when that evaluates smaller.

    Companion-matrix eigenvalues split an m-fold root by ``O(eps^(1/m))``;
    the cluster mean is accurate to ``O(eps)``.
    """
    xs = np.array(xs, dtype=complex)
    poly = np.polynomial.polynomial.polyval
    done = np.zeros(len(xs), dtype=bool)
    for i in range(len(xs)):
        if done[i]:
            continue
        near = np.abs(xs - xs[i]) <= tol * max(1.0, abs(xs[i]))
        near &= ~done
        done |= near
        if near.sum() > 1:
            mean = xs[near].mean()
            slack = 1e-14 * float(np.max(np.abs(c)))
            if abs(poly(mean, c)) <= np.max(np.abs(poly(xs[near], c))) + slack:
                xs[near] = mean
    return xs


def hdet_pencil_roots4(state: PureState4) -> QuarticRoots:
    """Projective roots of ``Hdet(u0 T0 + u1 T1)``, ordered by ``|u1/u0|``.

    Vanishing leading coefficients become roots at infinity.  If the whole
    quartic vanishes, the single root ``(1, 0)`` is returned and the flag set.
    """
    t = np.asarray(state.tensor, dtype=complex)
    c = _pencil_quartic(t)
    scale = float(np.max(np.abs(c)))
    if scale < ZERO_PENCIL:
        return QuarticRoots([np.array([1.0 + 0j, 0.0])], c, True)
    deg = 4
    while abs(c[deg]) < ZERO_PENCIL * max(1.0, scale) and deg > 0:
        deg -= 1
    xs = _merge_clusters(np.roots(c[:deg + 1][::-1]), c)
    roots = [np.array([1.0, x], dtype=complex) for x in xs]
    roots += [np.array([0.0, 1.0], dtype=complex)] * (4 - deg)
    roots = [r / np.linalg.norm(r) for r in roots]
    roots.sort(key=_root_key)
    return QuarticRoots(roots, c, False)


@dataclass(frozen=True, eq=False)
class TwelveTermForm:
    """Four-qubit coordinates with the four excluded entries (numerically) zero."""

    tensor: np.ndarray
    gauge: GaugeRecord
    rootIndex: int
    root: np.ndarray
    real_slots: tuple

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([self.tensor[s] for s in TWELVE_SLOTS])

    @property
    def excluded_residual(self) -> float:
        return float(max(abs(self.tensor[s]) for s in EXCLUDED))

    def form_tensor(self) -> np.ndarray:
        t = np.array(self.tensor, dtype=complex)
        for s in EXCLUDED:
            t[s] = 0.0
        return t

    def reconstruct(self) -> PureState4:
        return PureState4(self.gauge.inverse(self.form_tensor()).ravel())

    def to_json(self) -> dict:
        return {
            "rootIndex": self.rootIndex,
            "root": [[float(z.real), float(z.imag)] for z in self.root],
            "terms": [{"index": "".join(map(str, s)),
                       "coeff": [float(self.tensor[s].real), float(self.tensor[s].imag)]}
                      for s in TWELVE_SLOTS],
            "excludedResidual": self.excluded_residual,
            "gauge": self.gauge.to_json(),
        }


def _reduce_with_root(t: np.ndarray, root: np.ndarray, index: int) -> TwelveTermForm:
    ua = unitary_with_first_row(root)
    t1 = np.tensordot(ua, t, axes=(1, 0))
    slice0 = t1[0]
    norm = np.linalg.norm(slice0)
    if norm > 1e-14:
        # the candidate with the smaller lambda4 tolerates a slightly inexact root
        cands = canonical_candidates(PureState3((slice0 / norm).ravel()))
        cf = min(cands, key=lambda f: f.lambdas[4])
        ubcd = cf.gauge.unitaries
    else:
        ubcd = (np.eye(2),) * 3
    gauge = GaugeRecord((ua,) + tuple(ubcd))
    form = gauge.forward(t)
    diag, fixed = absorb_phases(form, PHASE_ORDER, tol=1e-12)
    gauge = gauge.then(GaugeRecord(tuple(np.diag(d) for d in diag)))
    form = gauge.forward(t)
    return TwelveTermForm(form, gauge, index, root, tuple(fixed))


def reduce_to_twelve(state: PureState4, root_index: int = 0) -> TwelveTermForm:
    """Twelve-term form built from the ``root_index``-th pencil root."""
    t = np.asarray(state.tensor, dtype=complex)
    roots = hdet_pencil_roots4(state).roots
    return _reduce_with_root(t, roots[root_index], root_index)


def reduce_all_roots(state: PureState4) -> list[TwelveTermForm]:
    """One twelve-term form per pencil root; the decomposition is not unique."""
    t = np.asarray(state.tensor, dtype=complex)
    return [_reduce_with_root(t, r, k) for k, r in enumerate(hdet_pencil_roots4(state).roots)]
