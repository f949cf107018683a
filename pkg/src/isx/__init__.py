"""Algebraic intersection spaces over the rationals, computed exactly."""
from .approximation import (
    Approximation,
    check_approximation,
    cone_data,
    default_approximation,
    local_duality_iso,
    obstructions_vanish,
    witt_approximation,
)
from .fixtures import emit_fixture, empty, pinched_torus
from .generate import GenProfile, apply_delta, generate_instance, mutate_instance
from .globalspace import GlobalDatum, IXModel, SectionFamily, global_duality, intersection_space, validate_global
from .graded import ChainComplex, ChainMap, GradedMap, GradedPairing, GradedSpace, homology, mapping_cone
from .instance import Instance
from .io import dump_instance, loads_instance
from .linalg import Matrix, Subspace, signature, symmetric_signature
from .pairing import (
    SignatureReport,
    default_sections,
    ix_gram_matrix,
    novikov_gram_matrix,
    random_sections,
    signature_report,
    untwisted_sections,
)
from .report import ConsistencyError, IsxError, PreconditionError, ValidationError, ValidationReport
from .tube import Ladder, TubeDatum, compute_ZY, validate_tube

__version__ = "0.1.0"
