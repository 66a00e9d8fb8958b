"""Pure states of three and four qubits and the local operations acting on them.

Amplitudes are stored in lexicographic order of the qubit indices, so
``amplitudes[4*i + 2*j + k]`` is ``t_ijk`` for three qubits.  All state
objects are immutable.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import NonUnitary, ZeroState

EPS_NORM = 1e-10
EPS_UNITARY = 1e-12
ZERO_AMPLITUDE = 1e-14

PARTIES = "ABCD"


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=complex)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class _PureState:
    amplitudes: np.ndarray
    n: int = field(init=False, default=0)

    def __post_init__(self):
        arr = _frozen(np.asarray(self.amplitudes, dtype=complex).ravel())
        if arr.size != 2**self.n:
            raise ValueError(f"expected {2**self.n} amplitudes, got {arr.size}")
        object.__setattr__(self, "amplitudes", arr)

    @property
    def tensor(self) -> np.ndarray:
        """Amplitudes as an ``n``-index array of shape ``(2,)*n``."""
        return self.amplitudes.reshape((2,) * self.n)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def __getitem__(self, index) -> complex:
        if isinstance(index, str):
            index = tuple(int(c) for c in index)
        return complex(self.tensor[tuple(index)])

    def __array__(self, dtype=None, copy=None):
        return np.array(self.amplitudes, dtype=dtype)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({np.array2string(self.amplitudes, precision=6)})"


@dataclass(frozen=True, eq=False, repr=False)
class PureState3(_PureState):
    """Three-qubit pure state with amplitudes ``t_000 .. t_111``."""

    n: int = field(init=False, default=3)

    @classmethod
    def from_tensor(cls, t) -> "PureState3":
        return cls(np.asarray(t, dtype=complex).reshape(8))


@dataclass(frozen=True, eq=False, repr=False)
class PureState4(_PureState):
    """Four-qubit pure state with amplitudes ``t_0000 .. t_1111``."""

    n: int = field(init=False, default=4)

    @classmethod
    def from_tensor(cls, t) -> "PureState4":
        return cls(np.asarray(t, dtype=complex).reshape(16))


def make_state(amplitudes) -> PureState3 | PureState4:
    """Wrap raw amplitudes (8 or 16 of them) without rescaling."""
    arr = np.asarray(amplitudes, dtype=complex).ravel()
    if arr.size == 8:
        return PureState3(arr)
    if arr.size == 16:
        return PureState4(arr)
    raise ValueError(f"expected 8 or 16 amplitudes, got {arr.size}")


class MatrixSlicePair(NamedTuple):
    """The two 2x2 slices ``(T_i)_jk = t_ijk`` of a three-qubit state."""

    T0: np.ndarray
    T1: np.ndarray


class ReducedDensity(NamedTuple):
    rho: np.ndarray
    which: str


@dataclass(frozen=True, eq=False)
class GaugeRecord:
    """Local unitaries taking a source state to a decomposed form.

    ``unitaries[p]`` acts on party ``p`` as in :func:`apply_local`; any phase
    redefinitions are already folded into them and ``phases`` only keeps the
    absorbed angles for reporting.  ``relabel`` is an optional party
    permutation applied *before* the unitaries (``new axis p`` = ``old axis
    relabel[p]``).
    """

    unitaries: tuple
    phases: tuple = ()
    relabel: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "unitaries", tuple(_frozen(u) for u in self.unitaries))
        object.__setattr__(self, "phases", tuple(float(p) for p in self.phases))
        if self.relabel is not None:
            object.__setattr__(self, "relabel", tuple(int(p) for p in self.relabel))

    @property
    def uA(self) -> np.ndarray:
        return self.unitaries[0]

    @property
    def uB(self) -> np.ndarray:
        return self.unitaries[1]

    @property
    def uC(self) -> np.ndarray:
        return self.unitaries[2]

    def forward(self, tensor: np.ndarray) -> np.ndarray:
        """Map source-state amplitudes to form amplitudes."""
        t = np.asarray(tensor, dtype=complex)
        if self.relabel is not None:
            t = np.transpose(t, self.relabel)
        return _apply(t, self.unitaries)

    def inverse(self, tensor: np.ndarray) -> np.ndarray:
        """Map form amplitudes back to the source-state frame."""
        t = _apply(np.asarray(tensor, dtype=complex), [u.conj().T for u in self.unitaries])
        if self.relabel is not None:
            t = np.transpose(t, np.argsort(self.relabel))
        return t

    def then(self, other: "GaugeRecord") -> "GaugeRecord":
        """Gauge equivalent to applying ``self`` followed by ``other``."""
        if other.relabel is not None:
            raise ValueError("the second gauge must not relabel parties")
        us = tuple(o @ u for o, u in zip(other.unitaries, self.unitaries))
        return GaugeRecord(us, self.phases + other.phases, self.relabel)

    def to_json(self) -> dict:
        out = {p: matrix_to_json(u) for p, u in zip(PARTIES, self.unitaries)}
        out["phases"] = list(self.phases)
        if self.relabel is not None:
            out["relabel"] = list(self.relabel)
        return out


def matrix_to_json(u: np.ndarray) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(u).ravel()]


def identity_gauge(n: int = 3) -> GaugeRecord:
    return GaugeRecord(tuple(np.eye(2, dtype=complex) for _ in range(n)))


def _apply(t: np.ndarray, unitaries) -> np.ndarray:
    for axis, u in enumerate(unitaries):
        t = np.moveaxis(np.tensordot(u, t, axes=([1], [axis])), 0, axis)
    return t


def normalize(raw: Sequence[complex]) -> PureState3 | PureState4:
    """Rescale amplitudes by a positive constant to unit norm.

    Raises
    ------
    ZeroState
        If every amplitude is below 1e-14 in magnitude.
    """
    arr = np.asarray(raw, dtype=complex).ravel()
    if np.all(np.abs(arr) < ZERO_AMPLITUDE):
        raise ZeroState("all amplitudes vanish")
    return make_state(arr / np.linalg.norm(arr))


def is_normalized(state, tol: float = EPS_NORM) -> bool:
    return abs(state.norm - 1.0) <= tol


def slices(state: PureState3) -> MatrixSlicePair:
    t = state.tensor
    return MatrixSlicePair(t[0].copy(), t[1].copy())


def assemble(pair: MatrixSlicePair) -> PureState3:
    return PureState3.from_tensor(np.stack([pair.T0, pair.T1]))


def check_unitary(u, tol: float = EPS_UNITARY) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2) or not np.allclose(u.conj().T @ u, np.eye(2), rtol=0, atol=tol):
        raise NonUnitary(f"not a 2x2 unitary: {u!r}")
    return u


def apply_local(state, *unitaries):
    """Apply one single-qubit unitary per party.

    ``t'_ijk = sum_abc uA_ia uB_jb uC_kc t_abc`` (and the analogue for four
    qubits).

    Raises
    ------
    NonUnitary
        If any matrix fails ``u^dagger u = 1`` at 1e-12.
    """
    if len(unitaries) != state.n:
        raise ValueError(f"need {state.n} unitaries, got {len(unitaries)}")
    us = [check_unitary(u) for u in unitaries]
    return type(state).from_tensor(_apply(state.tensor, us))


def conjugate(state):
    return type(state)(state.amplitudes.conj())


def permute_parties(state, perm: Sequence[int]):
    """Relabel parties: qubit ``p`` of the result is qubit ``perm[p]`` of ``state``."""
    return type(state).from_tensor(np.transpose(state.tensor, tuple(perm)))


def _party_indices(which: str) -> list[int]:
    idx = [PARTIES.index(c) for c in which.upper()]
    if sorted(set(idx)) != idx:
        raise ValueError(f"bad party subset {which!r}")
    return idx


def reduced(state, which: str = "A") -> ReducedDensity:
    """Reduced density matrix of the parties in ``which`` (e.g. ``"A"``, ``"AB"``).

    The basis of a multi-party marginal is lexicographic in the kept qubits.
    """
    keep = _party_indices(which)
    if max(keep) >= state.n:
        raise ValueError(f"party subset {which!r} out of range for {state.n} qubits")
    rest = [p for p in range(state.n) if p not in keep]
    m = np.transpose(state.tensor, keep + rest).reshape(2 ** len(keep), -1)
    rho = m @ m.conj().T
    return ReducedDensity(rho, which.upper())


def fidelity(a, b) -> float:
    """Overlap magnitude ``|<a|b>|`` of two state vectors."""
    return float(abs(np.vdot(np.asarray(a).ravel(), np.asarray(b).ravel())))


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def haar_random_states(count: int, seed=None, n: int = 3) -> np.ndarray:
    """``count`` Haar-random states as a ``(count, 2**n)`` array."""
    rng = _rng(seed)
    z = rng.standard_normal((count, 2**n)) + 1j * rng.standard_normal((count, 2**n))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def haar_random_state(seed=None, n: int = 3):
    return make_state(haar_random_states(1, seed, n)[0])


def haar_random_unitaries(count: int, seed=None) -> np.ndarray:
    """``count`` Haar-distributed 2x2 unitaries, shape ``(count, 2, 2)``."""
    rng = _rng(seed)
    z = rng.standard_normal((count, 2, 2)) + 1j * rng.standard_normal((count, 2, 2))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=1, axis2=2)
    return q * (d / np.abs(d))[:, None, :]


def haar_random_unitary(seed=None) -> np.ndarray:
    return haar_random_unitaries(1, seed)[0]


def random_local_triple(seed=None, n: int = 3) -> tuple:
    return tuple(haar_random_unitaries(n, seed))


GHZ = PureState3(np.array([1, 0, 0, 0, 0, 0, 0, 1]) / np.sqrt(2))
W = PureState3(np.array([0, 1, 1, 0, 1, 0, 0, 0]) / np.sqrt(3))
PRODUCT = PureState3(np.array([1, 0, 0, 0, 0, 0, 0, 0]))
