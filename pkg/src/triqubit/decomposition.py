"""Sums of product states, the common output type of every decomposition."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .state import GaugeRecord, make_state


@dataclass(frozen=True, eq=False)
class Term:
    coeff: complex
    vectors: tuple  # one unit 2-vector per party, in the source frame

    def tensor(self) -> np.ndarray:
        out = np.array(self.coeff, dtype=complex)
        for v in self.vectors:
            out = np.multiply.outer(out, np.asarray(v, dtype=complex))
        return out

    def to_json(self) -> dict:
        return {
            "coeff": [float(np.real(self.coeff)), float(np.imag(self.coeff))],
            "vectors": [[[float(z.real), float(z.imag)] for z in v] for v in self.vectors],
        }


@dataclass(frozen=True, eq=False)
class ProductDecomposition:
    """``sum_r coeff_r |a_r> (x) |b_r> (x) |c_r>``.

    ``labels`` records, for each term, its position in the local product
    basis the decomposition was read from (e.g. ``(1, 0, 1)``), or ``None``
    when the vectors do not come from one orthonormal basis per party.
    """

    terms: tuple
    labels: tuple | None = None
    kind: str = ""

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    @property
    def n(self) -> int:
        return len(self.terms[0].vectors) if self.terms else 3

    def tensor(self) -> np.ndarray:
        out = np.zeros((2,) * self.n, dtype=complex)
        for term in self.terms:
            out += term.tensor()
        return out

    def state(self):
        return make_state(self.tensor())

    def coefficients(self) -> np.ndarray:
        return np.array([t.coeff for t in self.terms])

    def to_json(self) -> list:
        return [t.to_json() for t in self.terms]

    @classmethod
    def from_form(cls, form: np.ndarray, gauge: GaugeRecord,
                  positions: Iterable[Sequence[int]] | None = None,
                  tol: float = 0.0, kind: str = "") -> "ProductDecomposition":
        """Read terms off form amplitudes expressed in the basis given by ``gauge``.

        Either the listed ``positions`` or every amplitude above ``tol`` is kept.
        """
        form = np.asarray(form)
        n = form.ndim
        if positions is None:
            positions = [idx for idx in np.ndindex(form.shape) if abs(form[idx]) > tol]
        relabel = gauge.relabel if gauge.relabel is not None else tuple(range(n))
        terms, labels = [], []
        for pos in positions:
            pos = tuple(int(b) for b in pos)
            vectors: list = [None] * n
            for axis, bit in enumerate(pos):
                vectors[relabel[axis]] = np.conj(gauge.unitaries[axis][bit, :])
            terms.append(Term(complex(form[pos]), tuple(vectors)))
            labels.append(tuple(pos[relabel.index(p)] for p in range(n)))
        return cls(tuple(terms), tuple(labels), kind)
