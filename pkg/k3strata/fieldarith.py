"""
Elliptic curves y^2 = x^3 + ax + b over prime fields F_p (3 < p <= 2^20), their
Frobenius traces, and the strata of Kummer surfaces of products E1 x E2.

Point counts are naive: one pass over F_p against a cached table of the quadratic
character, vectorised with numpy.
"""
import functools
import json
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Mapping, Optional, Tuple

import numpy as np
import sympy

from .errors import FieldArithError, FieldMismatch, HasseBoundViolation, InvalidPrime, OutOfRange, SingularCurve
from .kummer import AbelianSlopeProfile, kummer_slopes
from .parallel import parallel_map
from .polygon import HeightValue, NewtonPolygon, StratumLabel, height_of, stratum_of

logger = logging.getLogger(__name__)

MAX_PRIME: int = 2 ** 20
SUPERSPECIAL_ARTIN_INVARIANT: int = 1

ORDINARY_CURVE_SLOPES: Tuple[Fraction, Fraction] = (Fraction(0), Fraction(1))
SUPERSINGULAR_CURVE_SLOPES: Tuple[Fraction, Fraction] = (Fraction(1, 2), Fraction(1, 2))


@dataclass(frozen=True)
class PrimeFieldSpec:
    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not 3 < self.p <= MAX_PRIME or not sympy.isprime(self.p):
            raise InvalidPrime(f"Expected a prime 3 < p <= {MAX_PRIME}, got {self.p!r}.")


@functools.lru_cache(maxsize=64)
def quadratic_character_table(p: int) -> np.ndarray:
    """chi(x) for x in 0..p-1: 1 on non-zero squares, -1 on non-squares, 0 at 0."""
    xs = np.arange(p, dtype=np.int64)
    table = np.full(p, -1, dtype=np.int64)
    table[(xs * xs) % p] = 1
    table[0] = 0
    table.setflags(write=False)
    return table


@dataclass(frozen=True)
class EllipticCurveData:
    """y^2 = x^3 + ax + b with a, b stored reduced modulo p."""

    field: PrimeFieldSpec
    a: int
    b: int

    def __post_init__(self):
        p = self.field.p
        object.__setattr__(self, "a", self.a % p)
        object.__setattr__(self, "b", self.b % p)
        if (4 * self.a ** 3 + 27 * self.b ** 2) % p == 0:
            raise SingularCurve(f"y^2 = x^3 + {self.a}x + {self.b} is singular over F_{p}.")

    @classmethod
    def create(cls, p: int, a: int, b: int) -> "EllipticCurveData":
        return cls(PrimeFieldSpec(p), a, b)

    @classmethod
    def from_dict(cls, data: Mapping) -> "EllipticCurveData":
        try:
            return cls.create(int(data["p"]), int(data["a"]), int(data["b"]))
        except (KeyError, TypeError, ValueError) as error:
            if isinstance(error, FieldArithError):
                raise
            raise FieldArithError(f"Malformed curve {data!r}: {error}") from error

    @property
    def p(self) -> int:
        return self.field.p

    def to_dict(self) -> dict:
        return {"p": self.p, "a": self.a, "b": self.b}

    def __str__(self):
        return f"y^2 = x^3 + {self.a}x + {self.b} over F_{self.p}"


@dataclass(frozen=True)
class FrobeniusData:
    p: int
    point_count: int
    trace: int
    supersingular: bool

    def __post_init__(self):
        if self.trace != self.p + 1 - self.point_count:
            raise FieldArithError(f"Trace {self.trace} does not match #E = {self.point_count} over F_{self.p}.")
        if self.trace * self.trace > 4 * self.p:
            raise HasseBoundViolation(f"a_p = {self.trace} violates |a_p| <= 2 sqrt({self.p}).")

    def to_dict(self) -> dict:
        return {"p": self.p, "count": self.point_count, "trace": self.trace, "supersingular": self.supersingular}


def count_points(curve: EllipticCurveData) -> FrobeniusData:
    """
    #E(F_p) = 1 + sum over x of (1 + chi(x^3 + ax + b)), the 1 counting the point at
    infinity; the trace is a_p = p + 1 - #E(F_p).
    """
    p = curve.p
    xs = np.arange(p, dtype=np.int64)
    rhs = ((xs * xs % p) * xs + curve.a * xs + curve.b) % p
    character_sum = int(quadratic_character_table(p)[rhs].sum())
    trace = -character_sum
    # a_p = 0 mod p is exact for p >= 5 since |a_p| <= 2 sqrt(p) < p
    return FrobeniusData(p, p + 1 + character_sum, trace, trace % p == 0)


def count_points_batch(curves: Iterable[EllipticCurveData], workers: Optional[int] = 0) -> List[FrobeniusData]:
    curves = list(curves)
    logger.debug("counting points on %d curves", len(curves))
    return parallel_map(count_points, curves, workers)


def twist(curve: EllipticCurveData, c: int) -> EllipticCurveData:
    """The twist y^2 = x^3 + a c^2 x + b c^3; a quadratic non-residue c negates the trace."""
    if c % curve.p == 0:
        raise FieldArithError("Twisting by zero is not defined.")
    return EllipticCurveData(curve.field, curve.a * c * c, curve.b * c ** 3)


def curve_slopes(f: FrobeniusData) -> Tuple[Fraction, Fraction]:
    return SUPERSINGULAR_CURVE_SLOPES if f.supersingular else ORDINARY_CURVE_SLOPES


def product_profile(e1: EllipticCurveData, e2: EllipticCurveData) -> AbelianSlopeProfile:
    if e1.field != e2.field:
        raise FieldMismatch(f"Curves live over F_{e1.p} and F_{e2.p}.")
    slopes = curve_slopes(count_points(e1)) + curve_slopes(count_points(e2))
    return AbelianSlopeProfile(tuple(sorted(slopes)))


@dataclass(frozen=True)
class KummerClassification:
    profile: AbelianSlopeProfile
    polygon: NewtonPolygon
    height: HeightValue
    stratum: StratumLabel
    curves: Tuple[Tuple[EllipticCurveData, FrobeniusData], ...] = ()

    def to_dict(self) -> dict:
        data = {
            "profile": self.profile.to_json(),
            "polygon": self.polygon.to_dict(),
            "height": self.height.to_json(),
            "stratum": self.stratum.to_dict(),
        }
        if self.curves:
            data["curves"] = [dict(curve.to_dict(), **frob.to_dict()) for curve, frob in self.curves]
        return data


def classify_kummer_of_profile(profile: AbelianSlopeProfile, sigma0: Optional[int] = None) -> KummerClassification:
    """
    Classify the Kummer surface of an abelian surface with the given slopes.

    Args:
        sigma0 (int): Artin invariant, required for supersingular profiles and forbidden
            otherwise. A supersingular Kummer surface has sigma0 = 1 (superspecial A) or 2.
    """
    polygon = kummer_slopes(profile)
    height = height_of(polygon)
    if height.is_infinite and sigma0 not in (None, 1, 2):
        raise OutOfRange(f"The Kummer surface of a supersingular abelian surface has Artin invariant 1 or 2, got {sigma0}.")
    return KummerClassification(profile, polygon, height, stratum_of(height, sigma0))


def classify_kummer_of_product(e1: EllipticCurveData, e2: EllipticCurveData) -> KummerClassification:
    """
    Product -> slope profile -> Kummer polygon -> height -> stratum. A product of two
    supersingular curves is superspecial, so its Kummer surface has Artin invariant 1.
    """
    if e1.field != e2.field:
        raise FieldMismatch(f"Curves live over F_{e1.p} and F_{e2.p}.")
    frobenius = (count_points(e1), count_points(e2))
    profile = AbelianSlopeProfile(tuple(sorted(curve_slopes(frobenius[0]) + curve_slopes(frobenius[1]))))
    sigma0 = SUPERSPECIAL_ARTIN_INVARIANT if profile.p_rank == 0 else None
    classification = classify_kummer_of_profile(profile, sigma0)
    return KummerClassification(
        profile,
        classification.polygon,
        classification.height,
        classification.stratum,
        ((e1, frobenius[0]), (e2, frobenius[1])),
    )


def read_curves(lines: Iterable[str]) -> List[EllipticCurveData]:
    """Curves from JSON lines {"p": .., "a": .., "b": ..}; blank lines are skipped."""
    curves = []
    for number, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            curves.append(curve_from_dict(json.loads(line)))
        except json.JSONDecodeError as error:
            raise FieldArithError(f"Line {number} is not JSON: {error}") from error
    return curves


def curve_from_dict(data: Mapping) -> EllipticCurveData:
    return EllipticCurveData.from_dict(data)


def curve_row(curve: EllipticCurveData) -> dict:
    """One output row: the curve, its Frobenius data and the Kummer surface of E x E."""
    classification = classify_kummer_of_product(curve, curve)
    frobenius = classification.curves[0][1]
    return {
        **curve.to_dict(),
        "count": frobenius.point_count,
        "trace": frobenius.trace,
        "supersingular": frobenius.supersingular,
        "profile": classification.profile.to_json(),
        "height": classification.height.to_json(),
        "stratum": str(classification.stratum),
    }
