"""Canonical forms, invariants and minimal decompositions of three-qubit pure states."""
__version__ = "0.1.0"

from .canonical import (
    CanonicalForm, ClosestProduct, GhzDecomposition, SymmetricForm, WeakAsymmetricForm,
    acin_canonical, canonical_candidates, canonical_state, closest_product_state, ghz_two_term,
    pencil_roots, reconstruct, symmetric_form, weak_asymmetric,
)
from .classification import (
    EntanglementClass, RealBasisResult, Type4dForm, classify, is_real, minimal_decomposition,
    nu, real_basis, real_six_lbps, type4d_form,
)
from .decomposition import ProductDecomposition, Term
from .errors import *  # noqa: F401,F403
from .fourqubit import TwelveTermForm, hdet_pencil_roots4, reduce_all_roots, reduce_to_twelve
from .invariants import (
    InvariantSet, J_from_canonical, check_identities, compute_I, compute_J, delta_J,
    grassl_I6, hyperdeterminant, invariant_report, invariant_set, recover_parameters,
)
from .state import (
    GHZ, PRODUCT, W, GaugeRecord, MatrixSlicePair, PureState3, PureState4, ReducedDensity,
    apply_local, assemble, conjugate, fidelity, haar_random_state, haar_random_states,
    haar_random_unitary, make_state, normalize, permute_parties, reduced, slices,
)

