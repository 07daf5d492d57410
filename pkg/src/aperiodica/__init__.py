"""One-dimensional Pisot substitution tilings and their model-set geometry.

The package splits along the pipeline: exact ring arithmetic and certified
root enclosures (:mod:`aperiodica.numberfield`), symbolic substitutions and
Perron-Frobenius data (:mod:`aperiodica.substitution`), the cut-and-project
scheme (:mod:`aperiodica.cutproject`), window sets via graph-directed
function systems (:mod:`aperiodica.rauzy`), the dual tiling
(:mod:`aperiodica.dual`), its polygonal realization
(:mod:`aperiodica.geometry2d`) and the end-to-end density verification
(:mod:`aperiodica.verify`).
"""

from .cutproject import CutProjectScheme, window_density_check
from .dual import DualSubstitution, dual_of_dual_check, dual_windows, dualize, generate_dual_pointset
from .errors import AperiodicaError
from .fixtures import all_fixtures, get_fixture
from .geometry2d import audit_patch, polygonal_prototiles, shoelace_area, substitute_patch
from .intpoly import IntPolynomial
from .numberfield import (
    ConjugateSet,
    FieldElement,
    NumberField,
    PisotClass,
    classify_pisot,
    isolate_roots,
)
from .rauzy import (
    attractor_cloud,
    derive_set_equations,
    hausdorff_distance,
    interval_attractor,
    star_equations,
)
from .substitution import (
    IntervalTiling,
    PFData,
    SymbolicSubstitution,
    density,
    fixed_point_tiling,
    is_primitive,
    matrix_of,
    merge_letters,
    mn_substitution,
    pf_data,
)
from .verify import VerificationReport, scan_mn_family, verify_fixture, verify_model_set

__version__ = "0.1.0"

__all__ = [
    "AperiodicaError",
    "ConjugateSet",
    "CutProjectScheme",
    "DualSubstitution",
    "FieldElement",
    "IntPolynomial",
    "IntervalTiling",
    "NumberField",
    "PFData",
    "PisotClass",
    "SymbolicSubstitution",
    "VerificationReport",
    "all_fixtures",
    "attractor_cloud",
    "audit_patch",
    "classify_pisot",
    "density",
    "derive_set_equations",
    "dual_of_dual_check",
    "dual_windows",
    "dualize",
    "fixed_point_tiling",
    "generate_dual_pointset",
    "get_fixture",
    "hausdorff_distance",
    "interval_attractor",
    "is_primitive",
    "isolate_roots",
    "matrix_of",
    "merge_letters",
    "mn_substitution",
    "pf_data",
    "polygonal_prototiles",
    "scan_mn_family",
    "shoelace_area",
    "star_equations",
    "substitute_patch",
    "verify_fixture",
    "verify_model_set",
    "window_density_check",
]
