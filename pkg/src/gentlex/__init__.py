"""Gentle algebras, their dissected surfaces, and exceptional sequences in K^b(proj A)."""

from .field import DEFAULT_PRIME
from .quiver import (
    Arrow,
    GentleQuiver,
    PathAlgebra,
    PathVector,
    QuiverError,
    has_full_relation_cycle,
    load_quiver,
    make_quiver,
    parse_quiver,
    serialize_quiver,
    validate_gentle,
)
from .ribbon import SurfaceInvariants, classify_quiver, classify_special, is_loop_arc, surface_invariants
from .combinatorics import (
    can_complete,
    cut_collection,
    cut_vertex,
    exists_full_exceptional,
    gen_surface_quiver,
    induced_collection_quiver,
    is_exceptional_dissection,
    koszul_dual_quiver,
    linear_extensions,
)
from .complexes import (
    ChainMap,
    ProjComplex,
    cone,
    hom_all,
    hom_basis,
    hom_dims,
    is_contractible,
    is_exceptional_object,
    is_exceptional_sequence,
    is_presilting,
    iso_test,
    minimalize,
    projective_stalk,
)
from .modules import ModuleRep, injective_module, nakayama, projective_module, projective_resolution
from .braid import (
    BraidWord,
    ExceptionalSequence,
    apply_word,
    canonical_key,
    left_dual,
    left_mutation,
    normalize_shift,
    orbit_explore,
    presilting_shift,
    right_dual,
    right_mutation,
    seed_sequence,
    serre_check,
)

__version__ = "0.1.0"
