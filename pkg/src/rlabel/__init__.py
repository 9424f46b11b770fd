"""Graded posets, flag vectors, ab/cd-indexes and R-labeling search."""

from .flag import FlagVector, flag_f_from_h, flag_f_vector, flag_h_vector
from .labeling import (
    Labeling,
    RisingStatus,
    TripleAssignment,
    assignment_to_labeling,
    breakpoints,
    descent_distribution,
    is_r_labeling,
    is_rising,
    is_triple_assignment,
    labeling_to_assignment,
    locally_valid,
    rising_chain_status,
)
from .polynomial import (
    AbPolynomial,
    CdPolynomial,
    NotExpressible,
    ab_index_from_assignment,
    ab_index_from_flag_h,
    expand_cd,
    to_cd_index,
)
from .poset import (
    GradedPoset,
    boolean_lattice,
    butterfly,
    chain,
    from_cover_relations,
    glue,
    glued_butterfly,
    interval,
    is_eulerian,
    maximal_chains,
    triplets,
)
from .search import Mode, SearchOutcome, Status, search_triple_assignment


__version__ = "0.1.0"
