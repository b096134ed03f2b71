"""
Exact arithmetic for the height strata of polarized K3 surfaces in positive
characteristic: Newton and Hodge polygons, the Kummer slope functor, ampleness of
Kummer polarizations, sums-of-sixteen-squares coverage of polarization degrees, and
Kummer surfaces of products of elliptic curves over prime fields.

Settings are YAML files loaded through the `unlock` decorator; objects named in them by
an `_instance_` key are built with `instantiate`.
"""

__version__ = "0.1.0"

from .config import Config, load_settings
from .core import unlock
from .coverage import (
    CoverageResult,
    Family,
    achievable_degrees,
    coverage_threshold,
    paper_bounds_report,
    reachable_residues,
    reachable_sums,
    verify_lemma_res,
    verify_remark,
)
from .errors import K3StrataError
from .fieldarith import EllipticCurveData, PrimeFieldSpec, classify_kummer_of_product, count_points
from .instantiate import instantiate
from .kummer import AbelianSlopeProfile, KummerParams, check_ampleness, kummer_slopes, polarization_degree
from .polygon import (
    HeightValue,
    NewtonPolygon,
    StratumLabel,
    classify,
    height_of,
    make_newton,
    newton_from_height,
    stratum_of,
)

# Names to import with wildcard import
__all__ = [
    "unlock",
    "instantiate",
    "Config",
    "load_settings",
    "K3StrataError",
    "NewtonPolygon",
    "HeightValue",
    "StratumLabel",
    "make_newton",
    "height_of",
    "newton_from_height",
    "classify",
    "stratum_of",
    "AbelianSlopeProfile",
    "KummerParams",
    "kummer_slopes",
    "polarization_degree",
    "check_ampleness",
    "CoverageResult",
    "Family",
    "reachable_sums",
    "reachable_residues",
    "verify_lemma_res",
    "verify_remark",
    "coverage_threshold",
    "achievable_degrees",
    "paper_bounds_report",
    "PrimeFieldSpec",
    "EllipticCurveData",
    "count_points",
    "classify_kummer_of_product",
]
