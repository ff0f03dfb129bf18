"""Conditional expectation operators on finite probability spaces.

Partitions stand in for sub-sigma-fields, conditional expectations are
measure-weighted block projections, alternating products of them converge
to the projection onto the intersection field, and sufficiency of a
partition for a family of measures is decidable with certificates and
witnesses.  A symbolic reflection-orbit engine handles the construction
showing that the union of two sufficient fields can fail to be sufficient.
"""

from .space import (
    MeasureFamily,
    OutcomeSpace,
    Partition,
    StructuralError,
    as_vector,
    completion,
    is_measurable,
    join,
    meet,
    null_set,
)
from .spacefile import (
    SpaceBundle,
    SpaceFormatError,
    load_space_file,
    parse_space_data,
    space_file_dict,
    write_space_file,
)
from .operators import (
    CondExpOperator,
    IterationReport,
    OperatorProduct,
    PropertyReport,
    SumBoundReport,
    WeightedInnerProduct,
    direct_meet_operator,
    dyadic_average_trajectory,
    iterate,
    power_difference_ledger,
    sandwich_product,
    verify_projection_properties,
)
from .sequences import (
    BoundReport,
    IdentityReport,
    convex_sum_identity,
    dyadic_bound_check,
    first_convexity_violation,
    is_convex,
    second_difference,
)
from .sufficiency import (
    SufficiencyCertificate,
    SuiteReport,
    Witness,
    check_sufficient,
    check_sufficient_for_f,
    contains_null_field,
    countable_intersection_suite,
    decreasing_chain_suite,
    intersection_sufficiency_suite,
)
from .counterexample import (
    EMPTY,
    EVERYTHING,
    GeneratorAtom,
    ReflectionPoint,
    SymbolicSet,
    Truncation,
    complement,
    finite_truncation,
    format_set_expression,
    in_diagonal,
    intersection_of,
    membership,
    orbit,
    parse_set_expression,
    refute_diagonal,
    truncation_join_is_sufficient,
    union_of,
    verify_g_construction,
)
from .rng import portable_rng

__version__ = "0.1.0"
