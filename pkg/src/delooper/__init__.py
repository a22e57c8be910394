"""Exact-arithmetic workbench for the finite constructions behind loop-space
obstruction theory: restricted simplicial objects over f.g. abelian groups
and their Moore homotopy, permutohedral indexing of higher operation
schemas, the free simplicial group with its derived composition, sphere
operation tables with the algebraic delooping detector, and strict
degeneracy synthesis on Reedy-fibrant inputs."""

__version__ = "0.1.0"

from .abelian import Hom, PresentedGroup
from .delta_core import (
    DeltaSAb,
    SAb,
    degenerate_subobject,
    free_abelian,
    free_degeneracy_extension,
    is_reedy_fibrant,
    matching_object,
    underlying_delta,
    verify_identities,
)
from .intlin import Mat, smith_normal_form
from .moore import (
    BisimplicialAbelianGroup,
    ChainComplex,
    GradedAbelianGroup,
    diagonal,
    dold_kan,
    e2_page,
    external_product,
    homotopy_groups,
    moore_complex,
)
from .permutohedron import (
    build_permutohedron,
    compatible_schema,
    compatible_sequence_schema,
    label,
    proper_factors,
    simplex_face_index,
)
from .pi_algebra import (
    Obstruction,
    PiAlgebraFragment,
    SphereTable,
    comonad_T,
    default_table,
    deloop,
    free_fragment,
    indecomposables,
    is_abelian,
    retract_complement,
    validate,
)
from .simplicial import FiniteSimplicialSet, sphere, standard_simplex, zero_sphere
from .star import check_condition_star, check_functoriality, milnor_F, retraction_mbar, star
from .synthesis import HomotopyDegeneracyData, rho_map, split_complement, synthesize
from .words import DegeneracyWord, FaceWord
