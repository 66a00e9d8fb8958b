"""Seeded state families: one generator per type, real families, non-real states."""
from __future__ import annotations

import math

import numpy as np

from .canonical import canonical_state
from .state import (
    PureState3, apply_local, haar_random_states, normalize, permute_parties, random_local_triple,
)

# lambda patterns: zero entries are forced, the rest drawn from [LOW, 1]
LOW = 0.2
_PATTERNS = {
    "T1": (1, 0, 0, 0, 0),
    "T2b": (1, 0, 0, 0, 1),
    "T3a": (1, 0, 1, 1, 0),
    "T3b:A": (1, 1, 0, 0, 1),
    "T3b:B": (1, 0, 1, 0, 1),
    "T3b:C": (1, 0, 0, 1, 1),
    "T4a": (1, 1, 1, 1, 0),
    "T4b:B": (1, 1, 0, 1, 1),
    "T4b:C": (1, 1, 1, 0, 1),
    "T4c:A": (1, 0, 1, 1, 1),
    "GENERIC5": (1, 1, 1, 1, 1),
}
_SWAP = {"A": (0, 1, 2), "B": (1, 0, 2), "C": (2, 1, 0)}
TYPE_KEYS = ("T1", "T2a:A", "T2a:B", "T2a:C", "T2b", "T3a", "T3b:A", "T3b:B", "T3b:C",
             "T4a", "T4b:A", "T4b:B", "T4b:C", "T4c:A", "T4c:B", "T4c:C", "T4d", "GENERIC5")


def _distinct(rng, k: int, gap: float = 0.02) -> np.ndarray:
    """``k`` draws from ``[LOW, 1]`` pairwise separated, to avoid accidental ties."""
    while True:
        x = rng.uniform(LOW, 1.0, k)
        if k < 2 or np.min(np.diff(np.sort(x))) > gap:
            return x


def _from_pattern(rng, pattern, phi: float) -> PureState3:
    lam = np.zeros(5)
    idx = [i for i, p in enumerate(pattern) if p]
    lam[idx] = _distinct(rng, len(idx))
    return canonical_state(lam / np.linalg.norm(lam), phi)


def _raw_type_state(key: str, rng) -> PureState3:
    tag, _, party = key.partition(":")
    if tag == "T2a":
        a, b = _distinct(rng, 2)
        bell = np.zeros((2, 2, 2), dtype=complex)
        bell[0, 0, 0], bell[0, 1, 1] = a, b
        return permute_parties(normalize(bell.ravel()), _SWAP[party])
    if tag == "T4d":
        t = np.zeros((2, 2, 2), dtype=complex)
        for slot, value in zip(((0, 0, 1), (0, 1, 0), (1, 0, 0), (1, 1, 1)), _distinct(rng, 4)):
            t[slot] = value
        return normalize(t.ravel())
    if tag == "T4b" and party == "A":
        return permute_parties(_raw_type_state("T4b:B", rng), _SWAP["B"])
    if tag == "T4c" and party in ("B", "C"):
        return permute_parties(_raw_type_state("T4c:A", rng), _SWAP[party])
    phi = rng.uniform(0.3, math.pi - 0.3) if tag == "GENERIC5" else 0.0
    return _from_pattern(rng, _PATTERNS[key], phi)


def type_state(key: str, seed) -> PureState3:
    """Random state of the given type key (e.g. ``"T4b:C"``), locally scrambled."""
    rng = np.random.default_rng(seed)
    raw = _raw_type_state(key, rng)
    return apply_local(raw, *random_local_triple(rng))


def type_suite(per_type: int = 3, seed: int = 0) -> list[tuple[str, PureState3]]:
    """``per_type`` scrambled states for every type key."""
    out = []
    for k, key in enumerate(TYPE_KEYS):
        for r in range(per_type):
            out.append((key, type_state(key, [seed, k, r])))
    return out


def ghz_family_state(seed) -> tuple[PureState3, dict]:
    """``alpha(|000> + e^{i delta}|f1 f2 f3>)``, a real state with ``Delta_J = 0``."""
    rng = np.random.default_rng(seed)
    delta = rng.uniform(0.0, 2 * math.pi)
    gamma = rng.uniform(0.2, math.pi / 2 - 0.05, 3)
    t = np.zeros((2, 2, 2), dtype=complex)
    t[0, 0, 0] = 1.0
    f = [np.array([math.cos(g), math.sin(g)]) for g in gamma]
    t += np.exp(1j * delta) * np.einsum("i,j,k->ijk", *f)
    state = normalize(t.ravel())
    return state, {"delta": delta, "gamma": gamma}


def real_phase_state(seed) -> PureState3:
    """Canonical state with ``phi`` in ``{0, pi}``, locally scrambled."""
    rng = np.random.default_rng(seed)
    phi = math.pi * int(rng.integers(2))
    raw = _from_pattern(rng, _PATTERNS["GENERIC5"], phi)
    return apply_local(raw, *random_local_triple(rng))


def haar_states(count: int, seed) -> list[PureState3]:
    return [PureState3(x) for x in haar_random_states(count, seed)]
