"""Integer Apollonian circle packings: exact arithmetic, orbit enumeration,
tangency forms, and curvature-density experiments."""

from .backend import BACKEND
from .density import (
    ExperimentConfig,
    QuaternaryForm,
    base_curvature_set,
    count_two_squares,
    intersection_exact,
    local_density,
    quaternary_representation_count,
    run_density_experiment,
    select_windows,
    singular_series,
)
from .errors import ArithmeticRangeError, BudgetError, ValidationError
from .forms import (
    BinaryQuadraticForm,
    TangencyForm,
    count_distinct_values,
    min_represented,
    representation_count,
    spin_map,
    tangency_form,
    value_set,
    verify_change_of_variables,
)
from .geometry import CirclePlacement, layout_packing, svg_document
from .orbit import (
    delta_fit,
    count_multiplicity,
    kappa,
    tangency_curvatures,
    walk,
)
from .quadruple import (
    DescartesQuadruple,
    GroupElement,
    apply_generator,
    apply_word,
    evaluate_descartes,
    generator,
    is_primitive,
    is_reduced,
    parse_quadruple,
    reduce_to_root,
    solve_fourth,
)

__version__ = "0.1.0"

__all__ = [
    "ArithmeticRangeError",
    "BACKEND",
    "BinaryQuadraticForm",
    "BudgetError",
    "CirclePlacement",
    "DescartesQuadruple",
    "ExperimentConfig",
    "GroupElement",
    "QuaternaryForm",
    "TangencyForm",
    "ValidationError",
    "apply_generator",
    "apply_word",
    "base_curvature_set",
    "count_distinct_values",
    "count_multiplicity",
    "count_two_squares",
    "delta_fit",
    "evaluate_descartes",
    "generator",
    "intersection_exact",
    "is_primitive",
    "is_reduced",
    "kappa",
    "layout_packing",
    "local_density",
    "min_represented",
    "parse_quadruple",
    "quaternary_representation_count",
    "reduce_to_root",
    "representation_count",
    "run_density_experiment",
    "select_windows",
    "singular_series",
    "solve_fourth",
    "spin_map",
    "svg_document",
    "tangency_curvatures",
    "tangency_form",
    "value_set",
    "verify_change_of_variables",
    "walk",
]
