"""Small closed-form linear-algebra kernels shared by the decompositions."""
from __future__ import annotations

import math
from typing import NamedTuple, Sequence

import numpy as np


def hermitian_eig2(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a 2x2 Hermitian matrix in closed form.

    Returns eigenvalues in descending order and the eigenvectors as columns;
    every component is real except for one common phase on the second row.
    """
    a = float(h[0, 0].real)
    d = float(h[1, 1].real)
    b = complex(h[0, 1])
    mean = 0.5 * (a + d)
    rad = math.hypot(0.5 * (a - d), abs(b))
    theta = 0.5 * math.atan2(2.0 * abs(b), a - d)
    ph = np.exp(-1j * np.angle(b)) if b != 0 else 1.0
    c, s = math.cos(theta), math.sin(theta)
    vecs = np.array([[c, -s], [ph * s, ph * c]], dtype=complex)
    return np.array([mean + rad, mean - rad]), vecs


def complement(v: np.ndarray) -> np.ndarray:
    """Unit vector orthogonal to the unit 2-vector ``v``."""
    return np.array([-np.conj(v[1]), np.conj(v[0])])


class Svd2(NamedTuple):
    left: np.ndarray     # rows: conjugated left singular vectors
    right: np.ndarray    # rows: right singular vectors
    values: np.ndarray   # descending


def svd2(t: np.ndarray, tol: float = 1e-14) -> Svd2:
    """Closed-form SVD of a 2x2 complex matrix.

    The result satisfies ``left @ t @ right.T == diag(values)`` with the
    leading value real and non-negative in the (0, 0) slot.  When the second
    singular value vanishes the second left vector is the orthogonal
    complement, so the (1, 1) entry is whatever tiny residue remains.
    """
    t = np.asarray(t, dtype=complex)
    _, vecs = hermitian_eig2(t.conj().T @ t)
    v1, v2 = vecs[:, 0], vecs[:, 1]
    tv1 = t @ v1
    s1 = float(np.linalg.norm(tv1))
    w1 = tv1 / s1 if s1 > tol else np.array([1.0 + 0j, 0.0])
    tv2 = t @ v2
    s2 = float(np.linalg.norm(tv2))
    w2 = complement(w1)
    if s2 > tol * max(1.0, s1):
        # align the phase of w2 with t v2 so the (1,1) entry is real too
        ov = np.vdot(w2, tv2)
        if abs(ov) > 0:
            w2 = w2 * (ov / abs(ov))
    left = np.array([w1.conj(), w2.conj()])
    right = np.array([v1, v2])
    return Svd2(left, right, np.array([s1, s2]))


class ProjectiveRoots(NamedTuple):
    roots: list          # unit homogeneous pairs (u0, u1)
    degeneracy: str      # "distinct" | "double" | "identically-singular"


def quadratic_roots(a: complex, b: complex, c: complex, zero_tol: float = 1e-12,
                    double_tol: float = 1e-10) -> ProjectiveRoots:
    """Roots of the binary quadratic ``a u0^2 + b u0 u1 + c u1^2`` on CP^1.

    Each root is a unit vector ``(u0, u1)``; ``u0 = 0`` is the point at
    infinity of ``x = u1/u0``.  A discriminant below ``double_tol`` (relative
    to the squared coefficient scale) is snapped to an exact double root.
    """
    scale = max(abs(a), abs(b), abs(c))
    if scale < zero_tol:
        return ProjectiveRoots([np.array([1.0 + 0j, 0.0])], "identically-singular")
    a, b, c = a / scale, b / scale, c / scale
    disc = b * b - 4 * a * c
    if abs(disc) <= double_tol:
        # double root of c x^2 + b x + a (x = u1/u0), written homogeneously
        root = np.array([2 * c, -b]) if abs(c) >= abs(a) else np.array([-b, 2 * a])
        if np.linalg.norm(root) == 0:  # b = 0 and a or c vanishes
            root = np.array([1.0, 0.0]) if abs(c) >= abs(a) else np.array([0.0, 1.0])
        root = root / np.linalg.norm(root)
        return ProjectiveRoots([root.astype(complex)], "double")
    sq = np.sqrt(complex(disc))
    if (np.conj(b) * sq).real < 0:
        sq = -sq
    q = -0.5 * (b + sq)
    # roots of c x^2 + b x + a: x = q/c and x = a/q
    r1 = np.array([c, q], dtype=complex)
    r2 = np.array([q, a], dtype=complex)
    return ProjectiveRoots([r / np.linalg.norm(r) for r in (r1, r2)], "distinct")


def unitary_with_first_row(row: np.ndarray) -> np.ndarray:
    """2x2 unitary whose first row is the unit vector ``row``."""
    row = np.asarray(row, dtype=complex)
    return np.array([row, [-np.conj(row[1]), np.conj(row[0])]])


def basis_to_unitary(first: np.ndarray) -> np.ndarray:
    """Unitary whose action maps the unit vector ``first`` to ``|0>``."""
    first = np.asarray(first, dtype=complex)
    return np.array([first.conj(), complement(first).conj()])


def absorb_phases(tensor: np.ndarray, priority: Sequence[tuple], tol: float = 1e-12):
    """Per-party diagonal phases making chosen amplitudes real and non-negative.

    Positions in ``priority`` are taken greedily: an amplitude is fixed if it
    is larger than ``tol`` and its phase is independent of those already
    fixed.  Returns ``(diagonals, fixed)`` where ``diagonals[p]`` holds the
    two phase factors for party ``p`` and ``fixed`` lists the positions made
    real.
    """
    t = np.asarray(tensor)
    n = t.ndim
    rows, targets, fixed = [], [], []
    rank = 0
    for pos in priority:
        pos = tuple(pos)
        z = t[pos]
        if abs(z) <= tol:
            continue
        row = np.zeros(2 * n)
        for p, bit in enumerate(pos):
            row[2 * p + bit] = 1.0
        trial = np.array(rows + [row])
        r = np.linalg.matrix_rank(trial)
        if r > rank:
            rows.append(row)
            targets.append(-np.angle(z))
            fixed.append(pos)
            rank = r
        if rank == n + 1:
            break
    if rows:
        theta = np.linalg.lstsq(np.array(rows), np.array(targets), rcond=None)[0]
    else:
        theta = np.zeros(2 * n)
    diagonals = [np.exp(1j * theta[2 * p:2 * p + 2]) for p in range(n)]
    return diagonals, fixed


def cayley_hdet(t: np.ndarray) -> np.ndarray:
    """Cayley hyperdeterminant of 2x2x2 arrays (vectorised over leading axes)."""
    t = np.asarray(t)
    a000, a001, a010, a011 = t[..., 0, 0, 0], t[..., 0, 0, 1], t[..., 0, 1, 0], t[..., 0, 1, 1]
    a100, a101, a110, a111 = t[..., 1, 0, 0], t[..., 1, 0, 1], t[..., 1, 1, 0], t[..., 1, 1, 1]
    squares = (a000 * a111) ** 2 + (a001 * a110) ** 2 + (a010 * a101) ** 2 + (a100 * a011) ** 2
    cross = (a000 * a111 * a001 * a110 + a000 * a111 * a010 * a101
             + a000 * a111 * a100 * a011 + a001 * a110 * a010 * a101
             + a001 * a110 * a100 * a011 + a010 * a101 * a100 * a011)
    quartic = a000 * a011 * a101 * a110 + a001 * a010 * a100 * a111
    return squares - 2 * cross + 4 * quartic
