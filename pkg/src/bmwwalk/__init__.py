"""Exact Metropolis scan chains on the diagram basis of the BMW algebra."""

from .brauer import (
    BrauerDiagram,
    LoopProduct,
    enumerate_diagrams,
    format_diagram,
    generator,
    identity_diagram,
    inverse,
    is_permutation,
    lower_horizontal_edges,
    multiply,
    parse_diagram,
    upper_horizontal_edges,
)
from .chains import (
    Distribution,
    ScanChain,
    build_ki,
    chi2_norm,
    compose_scan,
    metropolize,
    power,
    stationary,
    step,
    tv_distance,
)
from .classes import (
    CommClass,
    SAssignment,
    StarPairing,
    embed_m1,
    involution_count,
    partition,
    pick_s_assignment,
    star_pairing,
    submatrix,
)
from .sampler import SampleReport, WalkState, run_scan, sample_distribution, step_walk
from .scalars import ExtScalar, QuadField
from .trace import (
    ShiftedBasis,
    build_khat,
    build_shifted_basis,
    check_main2,
    check_translate_identity,
    inner_shifted,
    khat_stationary,
    l2_shifted,
    tau_pair,
)
from .words import ReducedWord, all_minimal_words, bmw_length, reduced_expression

__version__ = "0.1.0"
