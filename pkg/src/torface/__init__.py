"""Toric face rings and their local cohomology.

Typical use::

    from torface import fixtures, StrandBuilder, box_scan
    model = fixtures.load("fx1")
    table = box_scan(StrandBuilder(model.ring()), "J", box=6)
"""

from .cellcomplex import CellComplex, simplicial_complex, validate_complex
from .errors import (
    NotConeWiseNormal,
    NotInM,
    ParseError,
    TorfaceError,
    UndecidedAtCap,
    UndecidedDegree,
    ValidationError,
)
from .homology import (
    CohomologyTable,
    StrandBuilder,
    Strand,
    box_scan,
    cm_diagnostic,
    duality_check,
    ishida_vs_dual_check,
    strand_cohomology,
    transpose_mismatches,
)
from .io import Model, load, load_document, parse_input
from .linalg import Field
from .localization import DualBasisElem, Localizer, MonomialFraction
from .semigroup import AffineSemigroup, MonoidalComplex, validate_monoidal
from .toricring import DegreeElem, Presentation, RingElem, ToricFaceRing

__version__ = "0.1.0"

__all__ = [
    "AffineSemigroup", "CellComplex", "CohomologyTable", "DegreeElem", "DualBasisElem", "Field",
    "Localizer", "Model", "MonoidalComplex", "MonomialFraction", "NotConeWiseNormal", "NotInM",
    "ParseError", "Presentation", "RingElem", "Strand", "StrandBuilder", "ToricFaceRing", "TorfaceError",
    "UndecidedAtCap", "UndecidedDegree", "ValidationError", "box_scan", "cm_diagnostic", "duality_check",
    "ishida_vs_dual_check", "load", "load_document", "parse_input", "simplicial_complex",
    "strand_cohomology", "transpose_mismatches", "validate_complex", "validate_monoidal",
]
