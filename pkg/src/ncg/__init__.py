"""Exact computer algebra for real and twisted spectral triples."""

__version__ = "0.1.0"

from .scalars import Scalar, Symbol, ensure_symbol  # noqa: E402
from .linalg import ConstraintSet, Mat  # noqa: E402
from .clifford import GAMMA, OperatorExpr, charge_conjugation, dirac_free  # noqa: E402
from .triples import AlgebraSpec, Factor, RealSpectralTriple, Representation, validate_triple  # noqa: E402
from .twists import Automorphism, TwistedTriple, minimal_twist, twist_by_grading, validate_twisted  # noqa: E402
from .fluctuations import FluctuationFamily, selfadjoint_family  # noqa: E402
from .models import build, describe, list_models  # noqa: E402
from .actions import fermionic_kernel, match_template, standard_action  # noqa: E402

__all__ = [
    "__version__",
    "Scalar",
    "Symbol",
    "ensure_symbol",
    "ConstraintSet",
    "Mat",
    "GAMMA",
    "OperatorExpr",
    "charge_conjugation",
    "dirac_free",
    "AlgebraSpec",
    "Factor",
    "RealSpectralTriple",
    "Representation",
    "validate_triple",
    "Automorphism",
    "TwistedTriple",
    "minimal_twist",
    "twist_by_grading",
    "validate_twisted",
    "FluctuationFamily",
    "selfadjoint_family",
    "build",
    "describe",
    "list_models",
    "fermionic_kernel",
    "match_template",
    "standard_action",
]
