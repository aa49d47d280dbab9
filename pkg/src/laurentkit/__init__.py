"""Exact algebra over additive categories with an automorphism.

Matrix categories over the integers and finite fields, twisted Laurent
morphism categories, chain complexes with explicit homotopies, twisted
nilpotence, global sections over the twisted projective line, and
machine-checkable certificates for every constructive claim.
"""

from __future__ import annotations

from .categories import IdemCat, MatCat, k0_class
from .certificates import Certificate, verify_certificate
from .chains import (
    ChainComplex,
    ChainHomotopy,
    ChainMap,
    Contraction,
    SplitSES,
    cone,
    cone_functorial,
    cyl,
    elementary_decomposition,
    el,
)
from .config import Config
from .errors import ConfigError, LaurentKitError
from .homology import (
    contraction_search,
    homology_ranks,
    is_homotopy_cartesian,
    is_homotopy_equivalence,
)
from .laurent import LaurentCat, LaurentMor, compose_laurent, try_invert_laurent
from .matrix import Matrix
from .nil import (
    NilObject,
    characteristic_sequence,
    chi,
    homotopy_nilpotent_certify,
    nilpotency_degree,
)
from .projline import XCat, gamma_finite, l0, l1, t_sequence
from .rings import PRESETS, RingSpec
from .strictify import strictify, strictify_object
from .suites import run_suite

__all__ = [
    "Certificate", "ChainComplex", "ChainHomotopy", "ChainMap", "Config", "ConfigError",
    "Contraction", "IdemCat", "LaurentCat", "LaurentKitError", "LaurentMor", "MatCat", "Matrix",
    "NilObject", "PRESETS", "RingSpec", "SplitSES", "XCat", "characteristic_sequence", "chi",
    "compose_laurent", "cone", "cone_functorial", "contraction_search", "cyl", "el",
    "elementary_decomposition", "gamma_finite", "homology_ranks", "homotopy_nilpotent_certify",
    "is_homotopy_cartesian", "is_homotopy_equivalence", "k0_class", "l0", "l1", "nilpotency_degree",
    "run_suite", "strictify", "strictify_object", "t_sequence", "try_invert_laurent",
    "verify_certificate",
]
