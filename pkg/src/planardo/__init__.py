"""Finite-field algebra for planar Dembowski-Ostrom trinomials.

Deterministic odd-characteristic field towers, DO polynomial arithmetic with
three independent planarity oracles (difference-map scan, Gram-determinant
quadratic-form test, cyclotomic character sums), closed-form planarity
criteria for trinomial families over cubic and quartic extensions, and a
sweep engine that cross-validates criteria against oracles with
deterministic CSV/JSON reports.
"""

from .cyclotomic import CycInt
from .dopoly import (
    DOPoly,
    GramMatrix,
    LinearizedPoly,
    PlanarityVerdict,
    bent_check,
    char_sum,
    compose_inner,
    compose_outer,
    gram_matrix,
    is_planar_bruteforce,
    is_planar_quadform,
    linearized_square_decompose,
    parse_do_poly,
    parse_do_terms,
    parse_element,
    planar_mask_for_pairs,
    quartic_square_equiv_probe,
)
from .criteria import (
    CriterionVerdict,
    binomial_det_value,
    binomial_nondegenerate,
    cubic1_criterion,
    cubic1_masks,
    cubic2_criterion,
    cubic2_masks,
    family_poly,
    monomial_planar_criterion,
    quartic_criterion,
    quartic_masks,
    tr_form_has_no_root,
    tr_form_has_no_root_scan,
    trace_norm_surjective,
)
from .fields import FieldCtx, FieldElem, FieldSizeError, build_field, lex_irreducible
from .sweeps import (
    Lcg,
    SweepReport,
    SweepSpec,
    emit_csv,
    emit_json,
    run_propab_sweep,
    run_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "CycInt", "DOPoly", "GramMatrix", "LinearizedPoly", "PlanarityVerdict",
    "bent_check", "char_sum", "compose_inner", "compose_outer", "gram_matrix",
    "is_planar_bruteforce", "is_planar_quadform", "linearized_square_decompose",
    "parse_do_poly", "parse_do_terms", "parse_element", "planar_mask_for_pairs",
    "quartic_square_equiv_probe", "CriterionVerdict", "binomial_det_value",
    "binomial_nondegenerate", "cubic1_criterion", "cubic1_masks",
    "cubic2_criterion", "cubic2_masks", "family_poly",
    "monomial_planar_criterion", "quartic_criterion", "quartic_masks",
    "tr_form_has_no_root", "tr_form_has_no_root_scan", "trace_norm_surjective",
    "FieldCtx", "FieldElem", "FieldSizeError", "build_field", "lex_irreducible",
    "Lcg", "SweepReport", "SweepSpec", "emit_csv", "emit_json",
    "run_propab_sweep", "run_sweep", "__version__",
]
