"""Exact arithmetic for the Carlitz module over global function fields.

The package computes the unit and class modules attached to the Carlitz
action on a curve over F_q: finite field towers, polynomial and rational
function arithmetic, Laurent series completions, two-chart cohomology
windows, the twisted boundary operator, and Smith normal forms over
F_q[t].  A separate analytic route through the Carlitz exponential
cross-checks the linear-algebra answer.
"""

from .field import FieldSpec, field
from .poly import Poly
from .ratfunc import RatFunc
from .series import LaurentSeries, ResidueField
from .places import Place, enumerate_places
from .exponential import (
    exp_coeffs,
    log_coeffs,
    verify_functional_eq,
    phi_action,
    PlaceExpCache,
)
from .curve import (
    CurvePackage,
    CechData,
    KElem,
    stable_cohomology,
    decompose,
)
from .shtuka import (
    FiniteAlgebra,
    AffineShtuka,
    hom_from_unit,
    check_prop_away,
    check_prop_lie,
)
from .smith import SmithForm, smith_normal_form
from .invariants import (
    BoundaryData,
    boundary_data,
    ClassModule,
    class_module,
    UnitModule,
    unit_module,
    realize_unit,
    analytic_check,
    twist_invariance,
    nonfg_table,
    report_lines,
)
from . import errors

__version__ = "0.1.0"

__all__ = [
    "FieldSpec", "field", "Poly", "RatFunc", "LaurentSeries",
    "ResidueField", "Place", "enumerate_places",
    "exp_coeffs", "log_coeffs", "verify_functional_eq", "phi_action",
    "PlaceExpCache",
    "CurvePackage", "CechData", "KElem", "stable_cohomology", "decompose",
    "FiniteAlgebra", "AffineShtuka", "hom_from_unit",
    "check_prop_away", "check_prop_lie",
    "SmithForm", "smith_normal_form",
    "BoundaryData", "boundary_data", "ClassModule", "class_module",
    "UnitModule", "unit_module", "realize_unit", "analytic_check",
    "twist_invariance", "nonfg_table", "report_lines",
    "errors",
]
