"""
Kummer surfaces of abelian surfaces: the slope functor from the abelian H^1 polygon to
the K3 H^2 polygon, the degree of the Kummer polarization built from (n, d', n_1..n_16),
and an exact-integer checker for the Seshadri-constant conditions that make it ample.

Every square-root bound is compared after squaring both sides, so the checker only ever
handles Python ints.
"""
import enum
import itertools
import logging
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import ClassVar, Dict, List, Mapping, Optional, Sequence, Tuple

from .errors import InvalidKummerParams, InvalidSlopeProfile, PolygonError
from .polygon import (
    K3_RANK,
    K3_WEIGHT,
    INFINITE,
    NewtonPolygon,
    StratumLabel,
    height_of,
    make_newton,
    stratum_of,
    to_slope,
)

logger = logging.getLogger(__name__)

NUM_PARTS: int = 16
ABELIAN_WEIGHT: int = 1
ABELIAN_RANK: int = 4

_ZERO, _HALF, _ONE = Fraction(0), Fraction(1, 2), Fraction(1)

ADMISSIBLE_PROFILES: Tuple[Tuple[Fraction, ...], ...] = (
    (_ZERO, _ZERO, _ONE, _ONE),
    (_ZERO, _HALF, _HALF, _ONE),
    (_HALF, _HALF, _HALF, _HALF),
)

# Slopes of the p-rank one case exactly as they are usually printed; the top pair should read 3/2.
PRINTED_P_RANK_ONE_SLOPES: Tuple[Fraction, ...] = (
    (_HALF, _HALF, _ONE, _ONE, Fraction(3, 4), Fraction(3, 4)) + (_ONE,) * NUM_PARTS
)


class AbelianType(enum.Enum):
    ORDINARY = "ordinary"
    P_RANK_ONE = "p_rank_one"
    SUPERSINGULAR_NON_SUPERSPECIAL = "supersingular_non_superspecial"
    SUPERSPECIAL = "superspecial"


@dataclass(frozen=True)
class AbelianSlopeProfile:
    """The four Newton slopes of H^1 of an abelian surface, sorted."""

    slopes: Tuple[Fraction, Fraction, Fraction, Fraction]

    def __post_init__(self):
        slopes = tuple(to_slope(s) for s in self.slopes)
        object.__setattr__(self, "slopes", slopes)

        if len(slopes) != ABELIAN_RANK:
            raise InvalidSlopeProfile(f"An abelian surface has {ABELIAN_RANK} slopes, got {len(slopes)}.")
        if list(slopes) != sorted(slopes):
            raise InvalidSlopeProfile(f"Slopes must be given in increasing order, got {slopes}.")
        try:
            make_newton(ABELIAN_WEIGHT, ABELIAN_RANK, slopes)
        except PolygonError as error:
            raise InvalidSlopeProfile(f"{type(error).__name__}: {error}") from error
        if slopes not in ADMISSIBLE_PROFILES:
            raise InvalidSlopeProfile(f"{slopes} is not the slope profile of an abelian surface.")

    @classmethod
    def ordinary(cls) -> "AbelianSlopeProfile":
        return cls(ADMISSIBLE_PROFILES[0])

    @classmethod
    def p_rank_one(cls) -> "AbelianSlopeProfile":
        return cls(ADMISSIBLE_PROFILES[1])

    @classmethod
    def supersingular(cls) -> "AbelianSlopeProfile":
        return cls(ADMISSIBLE_PROFILES[2])

    @classmethod
    def parse(cls, text: str) -> "AbelianSlopeProfile":
        return cls(tuple(sorted(to_slope(s.strip()) for s in text.split(","))))

    @property
    def p_rank(self) -> int:
        return self.slopes.count(_ZERO)

    def polygon(self) -> NewtonPolygon:
        return make_newton(ABELIAN_WEIGHT, ABELIAN_RANK, self.slopes)

    def abelian_type(self, superspecial: bool = True) -> AbelianType:
        """
        Args:
            superspecial (bool): Only read for supersingular profiles, which the slopes
                alone cannot split into superspecial and non-superspecial.
        """
        if self.p_rank == 2:
            return AbelianType.ORDINARY
        if self.p_rank == 1:
            return AbelianType.P_RANK_ONE
        return AbelianType.SUPERSPECIAL if superspecial else AbelianType.SUPERSINGULAR_NON_SUPERSPECIAL

    def to_json(self) -> List[str]:
        return [str(s) for s in self.slopes]

    def __str__(self):
        return "(" + ", ".join(self.to_json()) + ")"


def kummer_slopes(profile: AbelianSlopeProfile) -> NewtonPolygon:
    """
    H^2 of the Kummer surface is wedge^2 H^1(A) plus sixteen Tate twists, so its slopes are
    the six pairwise sums of the abelian slopes together with sixteen copies of 1.
    """
    pairwise = [a + b for a, b in itertools.combinations(profile.slopes, 2)]
    return make_newton(K3_WEIGHT, K3_RANK, pairwise + [_ONE] * NUM_PARTS)


def audit_printed_slopes() -> dict:
    """
    Re-validate the printed slope list for the p-rank one case against the pairwise-sum
    rule. The printed list breaks polygon symmetry; the height is unaffected.
    """
    computed = kummer_slopes(AbelianSlopeProfile.p_rank_one())
    finding = {
        "printed": [str(s) for s in sorted(PRINTED_P_RANK_ONE_SLOPES)],
        "computed": computed.to_dict(),
        "computed_height": height_of(computed).to_json(),
        "printed_valid": True,
        "printed_error": None,
    }
    try:
        make_newton(K3_WEIGHT, K3_RANK, PRINTED_P_RANK_ONE_SLOPES)
    except PolygonError as error:
        finding["printed_valid"] = False
        finding["printed_error"] = type(error).__name__
        logger.warning("Printed p-rank one slopes rejected (%s): %s", type(error).__name__, error)
    return finding


@dataclass(frozen=True)
class KummerParams:
    """
    n and d' describe the ample bundle (L^n (x) [-1]*L^n) on A with chi(L) = d', so
    (L, L)_A = 2d'; the sixteen parts n_j are the multiplicities removed at the
    exceptional curves over the two-torsion points.
    """

    n: int
    dprime: int
    parts: Tuple[int, ...]

    def __post_init__(self):
        parts = tuple(self.parts)
        object.__setattr__(self, "parts", parts)

        if len(parts) != NUM_PARTS:
            raise InvalidKummerParams(f"Expected {NUM_PARTS} parts n_j, got {len(parts)}.")
        for name, value in [("n", self.n), ("dprime", self.dprime)] + [(f"n_{j + 1}", v) for j, v in enumerate(parts)]:
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise InvalidKummerParams(f"{name} must be a positive integer, got {value!r}.")

    @classmethod
    def uniform(cls, n: int, dprime: int, part: int = 1) -> "KummerParams":
        return cls(n, dprime, (part,) * NUM_PARTS)

    @classmethod
    def from_dict(cls, data: Mapping) -> "KummerParams":
        try:
            return cls(data["n"], data["dprime"], tuple(data["parts"]))
        except (KeyError, TypeError) as error:
            raise InvalidKummerParams(f"Malformed Kummer parameters {data!r}: {error}") from error

    def with_part(self, j: int, value: int) -> "KummerParams":
        parts = list(self.parts)
        parts[j] = value
        return replace(self, parts=tuple(parts))

    @property
    def sum_of_squares(self) -> int:
        return sum(v * v for v in self.parts)

    def to_dict(self) -> dict:
        return {"n": self.n, "dprime": self.dprime, "parts": list(self.parts)}


def polarization_degree(p: KummerParams) -> int:
    """d with (M, M)_X = 2d: d = 2 n^2 d' - sum n_j^2. May be non-positive."""
    return 2 * p.n ** 2 * p.dprime - p.sum_of_squares


def self_intersection_on_blowup(p: KummerParams) -> int:
    """(N, N) on the blow-up of A at A[2]: 8 n^2 d' - 4 sum n_j^2."""
    return 8 * p.n ** 2 * p.dprime - 4 * p.sum_of_squares


@dataclass(frozen=True)
class AmplenessVariant:
    """
    A lower bound m on (L, O_A(E))_A over every elliptic curve E in A. m = 1 holds for
    every polarized abelian surface, m = 2 once polarized products are excluded; larger
    m come from excluding surfaces isogenous to E x E' by small degree.
    """

    m: int
    name: ClassVar[str] = "min_elliptic_intersection"

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 1:
            raise InvalidKummerParams(f"The elliptic intersection bound must be a positive integer, got {self.m!r}.")

    def to_dict(self) -> dict:
        return {"variant": self.name, "m": self.m}


@dataclass(frozen=True)
class MinEllipticIntersection(AmplenessVariant):
    pass


@dataclass(frozen=True)
class GeneralSurface(AmplenessVariant):
    m: int = 1
    name: ClassVar[str] = "general_surface"

    def __post_init__(self):
        super().__post_init__()
        if self.m != 1:
            raise InvalidKummerParams("GeneralSurface fixes m = 1.")


@dataclass(frozen=True)
class NonProduct(AmplenessVariant):
    m: int = 2
    name: ClassVar[str] = "non_product"

    def __post_init__(self):
        super().__post_init__()
        if self.m != 2:
            raise InvalidKummerParams("NonProduct fixes m = 2.")


def variant_from_name(name: str, m: Optional[int] = None) -> AmplenessVariant:
    key = name.replace("-", "_").lower()
    if key == GeneralSurface.name:
        return GeneralSurface()
    if key == NonProduct.name:
        return NonProduct()
    if key in (AmplenessVariant.name, "min_elliptic"):
        if m is None:
            raise InvalidKummerParams("The min-elliptic variant needs its bound m.")
        return MinEllipticIntersection(m)
    raise InvalidKummerParams(f"Unknown ampleness variant '{name}'.")


@dataclass(frozen=True)
class InequalityCheck:
    """A strict integer inequality lhs < rhs, kept with both sides for auditing."""

    name: str
    lhs: int
    rhs: int

    @property
    def holds(self) -> bool:
        return self.lhs < self.rhs

    @property
    def margin(self) -> int:
        return self.rhs - self.lhs

    def to_dict(self) -> dict:
        return {"name": self.name, "lhs": self.lhs, "rhs": self.rhs, "holds": self.holds}


def generic_bound_check(p: KummerParams, j: int) -> InequalityCheck:
    # n_j < sqrt(n^2 d') / 8, squared
    part = p.parts[j]
    return InequalityCheck("generic", 64 * part * part, p.n ** 2 * p.dprime)


def elliptic_bound_check(p: KummerParams, j: int, variant: AmplenessVariant) -> InequalityCheck:
    # 2 n_j < 2 n m / 4, cleared of denominators
    return InequalityCheck("elliptic", 4 * p.parts[j], p.n * variant.m)


def seshadri_generic_bound_holds(p: KummerParams, j: int) -> bool:
    """
    Whether part j (0-based) clears the bound coming from the generic Seshadri estimate
    eps_D >= sqrt(2 (D, D)_A) / 16 with (D, D)_A = 8 n^2 d'.
    """
    return generic_bound_check(p, j).holds


def seshadri_elliptic_bound_holds(p: KummerParams, j: int, variant: AmplenessVariant) -> bool:
    """
    Whether part j (0-based) clears the bound when the Seshadri constant is computed by
    an elliptic curve through four two-torsion points: eps_D = 2 n (L, O_A(E)) / 4.
    """
    return elliptic_bound_check(p, j, variant).holds


@dataclass(frozen=True)
class PartMargins:
    index: int
    part: int
    elliptic: InequalityCheck
    generic: InequalityCheck

    @property
    def ok(self) -> bool:
        return self.elliptic.holds and self.generic.holds

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "part": self.part,
            "elliptic": self.elliptic.to_dict(),
            "generic": self.generic.to_dict(),
        }


@dataclass(frozen=True)
class AmplenessReport:
    params: KummerParams
    variant: AmplenessVariant
    degree: int
    positivity: InequalityCheck
    margins: Tuple[PartMargins, ...]

    @property
    def positivity_ok(self) -> bool:
        return self.positivity.holds

    @property
    def elliptic_branch_ok(self) -> bool:
        return all(m.elliptic.holds for m in self.margins)

    @property
    def generic_branch_ok(self) -> bool:
        return all(m.generic.holds for m in self.margins)

    @property
    def ample(self) -> bool:
        return self.positivity_ok and all(m.ok for m in self.margins)

    def failures(self) -> List[str]:
        failed = []
        if not self.positivity_ok:
            failed.append("positivity")
        if not self.elliptic_branch_ok:
            failed.append("elliptic")
        if not self.generic_branch_ok:
            failed.append("generic")
        return failed

    def to_dict(self) -> dict:
        return {
            "params": self.params.to_dict(),
            "variant": self.variant.to_dict(),
            "d": self.degree,
            "ample": self.ample,
            "positivity_ok": self.positivity_ok,
            "elliptic_branch_ok": self.elliptic_branch_ok,
            "generic_branch_ok": self.generic_branch_ok,
            "failures": self.failures(),
            "positivity": self.positivity.to_dict(),
            "parts": [m.to_dict() for m in self.margins],
        }


def check_ampleness(p: KummerParams, variant: AmplenessVariant = GeneralSurface()) -> AmplenessReport:
    """
    Evaluate the three strict inequalities that make N ample on the blow-up.

    Positivity uses the sum of squares, i.e. (N, N) > 0. Both Seshadri branches are
    required for every part since it is not known which one computes eps_D; this is
    sufficient but may be stronger than necessary.
    """
    degree = polarization_degree(p)
    margins = tuple(
        PartMargins(j, part, elliptic_bound_check(p, j, variant), generic_bound_check(p, j))
        for j, part in enumerate(p.parts)
    )
    report = AmplenessReport(p, variant, degree, InequalityCheck("positivity", 0, degree), margins)
    logger.debug("ampleness of %s under %s: %s", p, variant, report.failures() or "ample")
    return report


def minimal_dprime(n: int, parts: Sequence[int], variant: AmplenessVariant = GeneralSurface()) -> Optional[int]:
    """
    Smallest d' for which check_ampleness passes with the given n and parts, or None
    when the elliptic branch fails (it does not depend on d').
    """
    parts = tuple(parts)
    if any(4 * part >= n * variant.m for part in parts):
        return None
    largest = max(parts)
    generic = 64 * largest * largest // (n * n) + 1
    positivity = sum(v * v for v in parts) // (2 * n * n) + 1
    return max(generic, positivity)


def minimal_dprime_for_bound(n: int, part_bound: int, variant: AmplenessVariant = GeneralSurface()) -> Optional[int]:
    """minimal_dprime for the worst case, every part equal to part_bound."""
    return minimal_dprime(n, (part_bound,) * NUM_PARTS, variant)


_ARTIN_INVARIANT: Dict[AbelianType, int] = {
    AbelianType.SUPERSINGULAR_NON_SUPERSPECIAL: 2,
    AbelianType.SUPERSPECIAL: 1,
}


def stratum_image(a_type: AbelianType) -> StratumLabel:
    """Stratum of the Kummer surface of an abelian surface of the given type."""
    if a_type is AbelianType.ORDINARY:
        return stratum_of(1)
    if a_type is AbelianType.P_RANK_ONE:
        return stratum_of(2)
    return stratum_of(INFINITE, _ARTIN_INVARIANT[a_type])
