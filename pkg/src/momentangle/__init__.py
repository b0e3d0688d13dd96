"""Face rings, moment-angle cohomology and B-rigidity invariants of simplicial complexes."""
from __future__ import annotations

__version__ = "0.1.0"

from .complex import (
    CapExceeded,
    Complex,
    ComplexError,
    are_isomorphic,
    connected_sums,
    core,
    euler_characteristic,
    full_subcomplex,
    join,
    link,
    missing_faces,
    star,
)
from .constructions import (
    PuzzleMoveSpec,
    barycentric_subdivision,
    catalog,
    construct_ep,
    puzzle_move,
    xi1,
    xi2,
)
from .hochster import (
    BettiTable,
    bigraded_betti,
    ma_cohomology_dims,
    missing_face_count_check,
    real_ma_cohomology_dims,
)
from .homology import is_generalized_homology_sphere, reduced_cohomology
from .linalg import GF2, GF3, QQ, Field
from .properties import (
    belts,
    class_q_membership,
    has_no_square,
    is_flag,
    is_suspension,
    satisfies_nsc,
    satisfies_scc,
    separating_circuit_witness,
)
from .ring import (
    BHRing,
    RingElement,
    RingFingerprint,
    annihilator_dim,
    baskakov_product,
    compare_fingerprints,
    factor_index,
    factor_index_bound,
    fingerprint,
    graded_power_dims,
    socle_dim,
    star_product,
)
from .taylor import TaylorComplex, build_taylor, taylor_power_dims, taylor_product, tor_dims_via_taylor
from .toric import (
    CharMatrix,
    h_vector,
    quotient_ring_ranks,
    validate_characteristic,
    weak_equivalence,
)
