"""Triangular norms and conorms, their order properties, and rearrangement inequalities."""

from .norm_catalog import (
    FAMILIES,
    PARAMETER_SAMPLES,
    T_CONORM,
    T_NORM,
    UNINORM,
    NumericalError,
    Operator,
    ParameterError,
    classify_uninorm,
    dual_under,
    eval_op,
    family_ids,
    make_operator,
    standard_dual,
    uninorm,
)
from .constructors import (
    Generator,
    Negation,
    OrdinalSummand,
    iterate_power,
    luka_generator,
    make_generator,
    make_strong_negation,
    nlog_generator,
    ordinal_sum,
    pseudo_inverse,
    standard_negation,
    tnorm_from_generator,
    yager_generator,
)
from .properties import (
    GridSpec,
    PropertyVerdict,
    check_archimedean,
    check_axioms,
    check_copula,
    check_property,
    check_zero_divisors,
)
from .rearrangement import (
    DUAL,
    PRIMAL,
    PairCheckResult,
    circular_value,
    pair_condition,
    rearrangement_value,
    search_counterexample,
    search_pair,
    sigma_m1,
    sigma_m2,
    sumprod_variant_check,
    transport_witness,
    verify_circular_extremes,
    verify_rearrangement,
)
from .cli_report import (
    RunConfig,
    SpecSyntaxError,
    Table3Cell,
    parse_operator_spec,
    render,
    reproduce_table3,
)

__version__ = "0.1.0"
