"""Exact-arithmetic toolkit: finite projective planes, arcs and ovals,
Weil sums over Galois fields, and mutually unbiased bases, with verifiable
certificates for every search result."""

__version__ = "0.1.0"

from .galois import Field, FieldElement, field_new
from .cyclotomic import CycInt, root_of_unity, weil_sum, weil_survey
from .plane import (
    Plane,
    Quasifield,
    pg2,
    nearfield9,
    quasifield_plane,
    hall_plane,
    verify_plane_axioms,
    find_desargues_violation,
    load_plane,
    save_plane,
)
from .ternary import TernaryRing, extract_ternary_ring, ptr_properties
from .arcs import (
    Arc,
    Conic,
    OvalClass,
    is_arc,
    is_oval,
    tangent_lines,
    canonical_conic,
    conic_solutions,
    fit_conic_5pts,
    nucleus,
    pointed_conic,
    opoly_hyperoval,
    classify_oval,
)
from .search import search_ovals, census_with_classes
from .mub import (
    MubSet,
    wf_mub_set,
    mub_fixture_d2,
    inner_product,
    verify_mub_set,
    char2_failure_demo,
    analogy_report,
)

__all__ = [
    "__version__",
    "Field",
    "FieldElement",
    "field_new",
    "CycInt",
    "root_of_unity",
    "weil_sum",
    "weil_survey",
    "Plane",
    "Quasifield",
    "pg2",
    "nearfield9",
    "quasifield_plane",
    "hall_plane",
    "verify_plane_axioms",
    "find_desargues_violation",
    "load_plane",
    "save_plane",
    "TernaryRing",
    "extract_ternary_ring",
    "ptr_properties",
    "Arc",
    "Conic",
    "OvalClass",
    "is_arc",
    "is_oval",
    "tangent_lines",
    "canonical_conic",
    "conic_solutions",
    "fit_conic_5pts",
    "nucleus",
    "pointed_conic",
    "opoly_hyperoval",
    "classify_oval",
    "search_ovals",
    "census_with_classes",
    "MubSet",
    "wf_mub_set",
    "mub_fixture_d2",
    "inner_product",
    "verify_mub_set",
    "char2_failure_demo",
    "analogy_report",
]
