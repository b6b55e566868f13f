"""Exact expected minimum k-assignment costs in random matrices with zero patterns.

Standard matrices have prescribed zero sites and independent exponential
entries elsewhere, with rate ``w_R(i) * w_C(j)``. The package evaluates the
expected optimum exactly (Möbius sum over partial covers, or exit time of a
two-dimensional urn process), and checks the result against exact solvers
and Monte Carlo sampling.
"""

from .cover_poset import (
    CapExceeded,
    CoverIdeal,
    FileSetPair,
    enumerate_ideal,
    enumerate_row_ideal,
    ideal_delete,
    ideal_quotient,
    is_partial_cover,
    mobius_table,
    mobius_to_top,
    truncated_boolean_mobius,
)
from .formulas import (
    ExpectedValue,
    expected_min_bcr,
    expected_min_combinatorial,
    expected_min_cs,
    expected_min_probabilistic,
    parisi,
    zeta2_limit_area,
)
from .instance import (
    Instance,
    InstanceError,
    Site,
    WeightedSet,
    ZeroPattern,
    complement_weight,
    parse_instance,
    serialize_instance,
    subset_weight,
)
from .matching import Cover, column_maximal_cover, maximum_matching, r_of, rank, row_maximal_cover
from .montecarlo import (
    SampleReport,
    estimate_expected_min,
    estimate_row_participation,
    estimate_site_participation,
    sample_matrix,
)
from .solver import (
    SolveResult,
    ReductionTrace,
    brute_force_min,
    min_cost_assignment,
    optimal_row_support,
    reduce_once,
    solve_by_reduction,
)
from .urn import (
    expected_exit_time,
    expected_exit_time_2d,
    exit_probability,
    reach_probability,
    simulate_urn,
)

__version__ = "0.1.0"

__all__ = [
    "CapExceeded",
    "Cover",
    "CoverIdeal",
    "ExpectedValue",
    "FileSetPair",
    "Instance",
    "InstanceError",
    "ReductionTrace",
    "SampleReport",
    "Site",
    "SolveResult",
    "WeightedSet",
    "ZeroPattern",
    "brute_force_min",
    "column_maximal_cover",
    "complement_weight",
    "enumerate_ideal",
    "enumerate_row_ideal",
    "estimate_expected_min",
    "estimate_row_participation",
    "estimate_site_participation",
    "exit_probability",
    "expected_exit_time",
    "expected_exit_time_2d",
    "expected_min_bcr",
    "expected_min_combinatorial",
    "expected_min_cs",
    "expected_min_probabilistic",
    "ideal_delete",
    "ideal_quotient",
    "is_partial_cover",
    "maximum_matching",
    "min_cost_assignment",
    "mobius_table",
    "mobius_to_top",
    "optimal_row_support",
    "parisi",
    "parse_instance",
    "r_of",
    "rank",
    "reach_probability",
    "reduce_once",
    "row_maximal_cover",
    "sample_matrix",
    "serialize_instance",
    "simulate_urn",
    "solve_by_reduction",
    "subset_weight",
    "truncated_boolean_mobius",
    "zeta2_limit_area",
]
