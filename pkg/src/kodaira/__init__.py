"""Exact construction and verification of a family of fibred surfaces.

Builds, over any parameter value away from 0 and -27/4, the elliptic
curve / genus-2 curve pair linked by a double cover, the configuration
curve of compatible point tuples inside the r-fold product, and the
numeric invariants of the associated Kodaira fibration: branch counts,
genus, canonical self-intersection, Euler characteristic, signature and
slope -- every step either exact or at certified precision.
"""

from .scalars import (
    ComplexApprox,
    NOT_REPRESENTABLE,
    NotRepresentable,
    QuadExt,
    SymbolicScalar,
    quadext,
    sqrt_in_tower,
)
from .elliptic import EllipticCurve, EllipticPoint, EC_INFINITY
from .genus2 import (
    GenusTwoCurve,
    GenusTwoPoint,
    X_INFINITY_MINUS,
    X_INFINITY_PLUS,
)
from .generic_points import (
    GenericityCertificate,
    SearchExhausted,
    find_generic_points,
    verify_certificate,
)
from .config_curve import (
    ConfigTuple,
    ConfigurationCurve,
    TowerReport,
    genus,
    tower_genus_closed_form,
    tower_genus_recursion,
)
from .intersection import (
    DivisorExpr,
    IntersectionTable,
    Transcript,
    build_table,
    canonical_divisor,
    intersect,
    k_squared,
    k_squared_closed_form,
    lemma_counts,
    solve_adjunction,
)
from .invariants import (
    InvariantReport,
    euler_characteristic,
    fiber_genus,
    invariant_report,
    range_checks,
    signature,
    slope,
    slope_table,
)
from .verifier import VerificationRun, precision_escalation_policy, verify_claim

__version__ = "0.1.0"

__all__ = [
    "ComplexApprox", "NOT_REPRESENTABLE", "NotRepresentable", "QuadExt",
    "SymbolicScalar", "quadext", "sqrt_in_tower",
    "EllipticCurve", "EllipticPoint", "EC_INFINITY",
    "GenusTwoCurve", "GenusTwoPoint", "X_INFINITY_MINUS", "X_INFINITY_PLUS",
    "GenericityCertificate", "SearchExhausted", "find_generic_points",
    "verify_certificate",
    "ConfigTuple", "ConfigurationCurve", "TowerReport", "genus",
    "tower_genus_closed_form", "tower_genus_recursion",
    "DivisorExpr", "IntersectionTable", "Transcript", "build_table",
    "canonical_divisor", "intersect", "k_squared", "k_squared_closed_form",
    "lemma_counts", "solve_adjunction",
    "InvariantReport", "euler_characteristic", "fiber_genus",
    "invariant_report", "range_checks", "signature", "slope", "slope_table",
    "VerificationRun", "precision_escalation_policy", "verify_claim",
]
