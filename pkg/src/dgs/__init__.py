"""Certify graphs as determined by their generalized spectrum (DGS).

A graph's membership in the square-free family -- det(W)/2^floor(n/2) odd
and square-free, W the walk matrix -- makes it provably DGS, and an
extended Smith-normal-form test widens the family.  This package computes
those certificates exactly: arbitrary-precision linear algebra, GF(2)
kernels, budgeted square-free certification, an exhaustive small-order
oracle, switching-based adversarial pairs, and a random-graph survey.
"""

from .arith import (
    FactorBudget,
    ResidualClass,
    SquarefreeCertificate,
    SquarefreeStatus,
    certify_squarefree,
    is_perfect_power,
    is_probable_prime,
)
from .criterion import (
    DgsVerdict,
    Evidence,
    VerdictKind,
    certify,
    check_extended,
    check_fn,
    verdict_to_dict,
    verdict_to_json,
)
from .graphs import (
    AdjacencyTextError,
    GmPartition,
    Graph,
    Graph6Error,
    complement,
    encode_graph6,
    find_gm_partitions,
    gm_switch,
    is_isomorphic,
    parse_adjacency_text,
    parse_graph6,
    random_gnp_half,
)
from .linalg import (
    CharPoly,
    F2Matrix,
    IntMatrix,
    RankDeficientError,
    RationalMatrix,
    SingularMatrixError,
    SnfResult,
    char_poly,
    char_poly_f2,
    det_bareiss,
    kernel_basis_f2,
    rank_f2,
    smith_normal_form,
    solve_rational,
)
from .oracle import (
    CospectralClass,
    QReconstruction,
    SpectrumKey,
    enumerate_cospectral_classes,
    enumerate_graphs,
    level_prime_support,
    reconstruct_q,
    spectrum_key,
    summarize_order,
)
from .survey import SurveyRow, rows_to_csv, run_survey
from .walk import (
    InternalInvariantError,
    Valuation2,
    WalkBundle,
    build_walk_bundle,
    det_walk,
    valuation2,
    walk_matrix,
)

__version__ = "0.1.0"
