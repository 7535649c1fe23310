"""Elementary subgroups of small matrix groups and their normal subgroups."""
from .cases import GateError, GroupCase, make_case
from .groups import GroupSizeError, MatrixGroup, is_normal, normal_closure, subgroup_closure
from .lab import (
    Lab,
    build_lab,
    congruence_subgroup,
    elementary_level,
    elementary_normal_level,
    extract_ideal,
    gauss_and_diameter,
    level_report,
    normality_case,
    verify_E_gen,
)

__all__ = [
    "GateError", "GroupCase", "make_case", "GroupSizeError", "MatrixGroup", "is_normal",
    "normal_closure", "subgroup_closure", "Lab", "build_lab", "congruence_subgroup",
    "elementary_level", "elementary_normal_level", "extract_ideal", "gauss_and_diameter",
    "level_report", "normality_case", "verify_E_gen",
]
