"""Exact symbolic checks for higher Koszul brackets, hbar-differential
operators and their duality.

The main entry points are re-exported here; see the submodules for the
full API.
"""

from .errors import (
    ChartError,
    CoordinateMapError,
    DivisibilityError,
    KoszulError,
    NotInvertibleError,
    NotPoissonError,
    ParityError,
    ParseError,
    WindowError,
)
from .kernel import BACKEND
from .superalgebra import (
    Chart,
    GradedVariable,
    SuperPolynomial,
    TruncationWindow,
    berezin_integral,
    declare_chart,
)
from .geometry import (
    BundlePair,
    bundle_chart,
    canonical_poisson,
    canonical_schouten,
    cotangent_chart,
    dual_bundle_chart,
    mackenzie_xu,
    pi_cotangent_chart,
    pi_tangent_chart,
)
from .hbar_ops import HbarOperator, apply, commutator, de_rham, divergence_half, hat
from .brackets import classical_bracket, derived_bracket, quantum_bracket
from .koszul import (
    PinfStructure,
    delta_P,
    higher_koszul_direct,
    higher_poisson,
    koszul_brackets_from_delta,
    symmetric_pair,
    validate_pinf,
)
from .duality import Density, GeneratingFunction, dual_operator, fiber_fourier, pairing
from .parser import parse_expression
from .suites import SUITES, Context, run_suite

__version__ = "0.1.0"
