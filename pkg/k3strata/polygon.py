"""
Exact Newton and Hodge polygon arithmetic.

Polygons of weight 1 (first cohomology of an abelian surface, rank 4) and weight 2
(second cohomology of a K3 surface, rank 22) share one type. All arithmetic is done
with fractions.Fraction; nothing in this module touches floating point.

The height of a K3 surface is read off the smallest Newton slope a as 1/(1 - a), or
infinity when a = 1. Heights 1..10 and infinity, refined by the Artin invariant in the
supersingular case, index the 20 strata

    M(1) > M(2) > ... > M(11) = Sigma(1) > ... > Sigma(10).
"""
import enum
import functools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

from .errors import (
    BreakIntegralityViolation,
    EndpointMismatch,
    MissingArtinInvariant,
    NonIntegralHeight,
    OddValuation,
    OutOfRange,
    PolygonError,
    RankMismatch,
    SlopeOutOfRange,
    SymmetryViolation,
    UnexpectedArtinInvariant,
    UnsupportedShape,
)

RationalSlope = Fraction
SlopeLike = Union[Fraction, int, str]

# weight -> rank
SUPPORTED_SHAPES: Dict[int, int] = {1: 4, 2: 22}
K3_WEIGHT: int = 2
K3_RANK: int = 22
MAX_FINITE_HEIGHT: int = 10
MAX_ARTIN_INVARIANT: int = 10


def to_slope(value: SlopeLike) -> Fraction:
    """
    Convert an int, a Fraction or a string such as "3/2" into an exact slope.

    Raises:
        TypeError: If value is a float; slopes must be exact.
    """
    if isinstance(value, float):
        raise TypeError(f"Slopes must be exact rationals, got the float {value!r}.")
    return Fraction(value)


def _validate_newton(weight: int, rank: int, segments: Tuple[Tuple[Fraction, int], ...]) -> None:
    if SUPPORTED_SHAPES.get(weight) != rank:
        raise UnsupportedShape(
            f"Only weight 1 / rank 4 and weight 2 / rank 22 polygons are supported, got weight {weight}, rank {rank}."
        )

    for slope, mult in segments:
        if not 0 <= slope <= weight:
            raise SlopeOutOfRange(f"Slope {slope} lies outside [0, {weight}].")
        if mult < 1:
            raise RankMismatch(f"Slope {slope} has non-positive multiplicity {mult}.")

    total = sum(mult for _, mult in segments)
    if total != rank:
        raise RankMismatch(f"Multiplicities sum to {total}, expected rank {rank}.")

    for (left, _), (right, _) in zip(segments, segments[1:]):
        if not left < right:
            raise PolygonError(f"Segments are not strictly increasing at slopes {left}, {right}.")

    multiplicities = dict(segments)
    for slope, mult in segments:
        mirror = weight - slope
        if multiplicities.get(mirror, 0) != mult:
            raise SymmetryViolation(
                f"Slope {slope} has multiplicity {mult} but its mirror {mirror} has "
                f"multiplicity {multiplicities.get(mirror, 0)}."
            )

    x, y = 0, Fraction(0)
    for slope, mult in segments:
        x += mult
        y += slope * mult
        if y.denominator != 1:
            raise BreakIntegralityViolation(f"Break point ({x}, {y}) after slope {slope} is not integral.")


@dataclass(frozen=True)
class NewtonPolygon:
    """
    A Newton polygon in canonical form: slopes strictly increasing, equal slopes merged.

    Construct through make_newton or from_segments; direct construction validates too
    but does not merge or sort.
    """

    weight: int
    rank: int
    segments: Tuple[Tuple[Fraction, int], ...]

    def __post_init__(self):
        _validate_newton(self.weight, self.rank, self.segments)

    @property
    def min_slope(self) -> Fraction:
        return self.segments[0][0]

    @property
    def max_slope(self) -> Fraction:
        return self.segments[-1][0]

    def multiplicity(self, slope: SlopeLike) -> int:
        return dict(self.segments).get(to_slope(slope), 0)

    def slopes(self) -> List[Fraction]:
        """The slope multiset, expanded and sorted."""
        return [slope for slope, mult in self.segments for _ in range(mult)]

    def ordinates(self) -> List[Fraction]:
        """The y value of the polygon at every integer abscissa 0..rank."""
        ys = [Fraction(0)]
        for slope in self.slopes():
            ys.append(ys[-1] + slope)
        return ys

    def vertices(self) -> List[Tuple[int, Fraction]]:
        points = [(0, Fraction(0))]
        for slope, mult in self.segments:
            x, y = points[-1]
            points.append((x + mult, y + slope * mult))
        return points

    def to_dict(self) -> dict:
        return {
            "weight": self.weight,
            "rank": self.rank,
            "segments": [[s.numerator, s.denominator, m] for s, m in self.segments],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "NewtonPolygon":
        try:
            segments = [(Fraction(num, den), mult) for num, den, mult in data["segments"]]
            if not all(isinstance(mult, int) and not isinstance(mult, bool) for _, mult in segments):
                raise PolygonError(f"Multiplicities must be integers, got {[mult for _, mult in segments]!r}.")
            return from_segments(data["weight"], data["rank"], segments)
        except (KeyError, TypeError, ZeroDivisionError) as error:
            raise PolygonError(f"Malformed polygon object {data!r}: {error}") from error

    def __str__(self):
        body = ", ".join(f"{s} x{m}" for s, m in self.segments)
        return f"NewtonPolygon(weight={self.weight}, rank={self.rank}, [{body}])"


def from_segments(weight: int, rank: int, segments: Iterable[Tuple[SlopeLike, int]]) -> NewtonPolygon:
    """
    Build a canonical polygon from (slope, multiplicity) pairs, merging repeats.
    """
    merged: Counter = Counter()
    for slope, mult in segments:
        merged[to_slope(slope)] += mult
    canonical = tuple(sorted((s, m) for s, m in merged.items() if m != 0))
    return NewtonPolygon(weight, rank, canonical)


def make_newton(weight: int, rank: int, slope_multiset: Union[Iterable[SlopeLike], Mapping[SlopeLike, int]]) -> NewtonPolygon:
    """
    Canonicalising constructor.

    Args:
        weight (int): 1 for abelian H^1, 2 for K3 H^2.
        rank (int): 4 or 22 respectively.
        slope_multiset: Either an iterable of slopes (one entry per copy) or a mapping
            from slope to multiplicity. Order does not matter.

    Returns:
        NewtonPolygon: The merged, sorted polygon.

    Raises:
        SlopeOutOfRange, RankMismatch, SymmetryViolation, BreakIntegralityViolation,
        UnsupportedShape: Naming the invariant that failed.
    """
    if isinstance(slope_multiset, Mapping):
        pairs = list(slope_multiset.items())
    else:
        pairs = [(slope, 1) for slope in slope_multiset]
    return from_segments(weight, rank, pairs)


def parse_slopes(text: str) -> List[Fraction]:
    """
    Parse the compact form "1/2*2,1*18,3/2*2" (slope, optional *multiplicity).
    """
    slopes: List[Fraction] = []
    for item in filter(None, (part.strip() for part in text.split(","))):
        slope, _, mult = item.partition("*")
        try:
            slopes.extend([to_slope(slope.strip())] * (int(mult) if mult else 1))
        except (ValueError, ZeroDivisionError) as error:
            raise PolygonError(f"Cannot parse slope entry '{item}': {error}") from error
    return slopes


@dataclass(frozen=True)
class HodgePolygon:
    degree: int
    entries: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        for (left, _), (right, _) in zip(self.entries, self.entries[1:]):
            if not left < right:
                raise PolygonError(f"Hodge slopes must be strictly increasing, got {left} then {right}.")
        for slope, mult in self.entries:
            if slope < 0 or mult < 0:
                raise PolygonError(f"Hodge entry ({slope}, {mult}) must be non-negative.")

    @property
    def rank(self) -> int:
        return sum(mult for _, mult in self.entries)

    def ordinates(self) -> List[Fraction]:
        ys = [Fraction(0)]
        for slope, mult in self.entries:
            for _ in range(mult):
                ys.append(ys[-1] + slope)
        return ys


def hodge_k3() -> HodgePolygon:
    return HodgePolygon(degree=2, entries=((0, 1), (1, 20), (2, 1)))


def lies_above(newton: NewtonPolygon, hp: HodgePolygon) -> bool:
    """
    True iff the Newton polygon is on or above the Hodge polygon at every integer abscissa.

    Raises:
        EndpointMismatch: If weight/degree, rank or total height differ.
    """
    newton_ys, hodge_ys = newton.ordinates(), hp.ordinates()
    if newton.weight != hp.degree or newton.rank != hp.rank or newton_ys[-1] != hodge_ys[-1]:
        raise EndpointMismatch(
            f"Newton polygon ends at ({newton.rank}, {newton_ys[-1]}) in weight {newton.weight}, "
            f"Hodge polygon at ({hp.rank}, {hodge_ys[-1]}) in degree {hp.degree}."
        )
    return all(n >= h for n, h in zip(newton_ys, hodge_ys))


@functools.total_ordering
@dataclass(frozen=True)
class HeightValue:
    """A height in 1..10, or infinite when value is None."""

    value: Optional[int] = None

    def __post_init__(self):
        if self.value is not None and not (isinstance(self.value, int) and 1 <= self.value <= MAX_FINITE_HEIGHT):
            raise OutOfRange(f"Finite heights lie in 1..{MAX_FINITE_HEIGHT}, got {self.value!r}.")

    @classmethod
    def infinite(cls) -> "HeightValue":
        return cls(None)

    @classmethod
    def parse(cls, text: Union[str, int]) -> "HeightValue":
        if isinstance(text, str) and text.strip().lower() in ("inf", "infinite", "infinity"):
            return cls(None)
        try:
            return cls(int(text))
        except ValueError as error:
            raise OutOfRange(f"Cannot read a height from {text!r}.") from error

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def to_json(self) -> Union[int, str]:
        return "infinite" if self.value is None else self.value

    def __lt__(self, other: "HeightValue") -> bool:
        if not isinstance(other, HeightValue):
            return NotImplemented
        if self.value is None:
            return False
        return other.value is None or self.value < other.value

    def __str__(self):
        return str(self.to_json())


INFINITE = HeightValue(None)


def as_height(h: Union[HeightValue, int, str]) -> HeightValue:
    return h if isinstance(h, HeightValue) else HeightValue.parse(h)


def _require_k3(newton: NewtonPolygon) -> None:
    if (newton.weight, newton.rank) != (K3_WEIGHT, K3_RANK):
        raise UnsupportedShape(f"Expected a K3 polygon (weight 2, rank 22), got weight {newton.weight}, rank {newton.rank}.")


def height_of(newton: NewtonPolygon) -> HeightValue:
    """
    Height from the smallest slope: 1/(1 - a), infinite when a = 1.

    Raises:
        NonIntegralHeight: When 1/(1 - a) is not an integer in 1..10; such a polygon
            is not the polygon of any K3 surface.
    """
    _require_k3(newton)
    alpha = newton.min_slope
    if alpha == 1:
        return INFINITE
    height = 1 / (1 - alpha)
    if height.denominator != 1 or not 1 <= height <= MAX_FINITE_HEIGHT:
        raise NonIntegralHeight(f"Smallest slope {alpha} gives height {height}, not an integer in 1..{MAX_FINITE_HEIGHT}.")
    return HeightValue(int(height))


def newton_from_height(h: Union[HeightValue, int, str]) -> NewtonPolygon:
    """
    The unique K3 polygon of the given height: slopes 1 - 1/h and 1 + 1/h with
    multiplicity h each, and 1 with multiplicity 22 - 2h.
    """
    h = as_height(h)
    if h.is_infinite:
        return from_segments(K3_WEIGHT, K3_RANK, [(1, K3_RANK)])
    step = Fraction(1, h.value)
    return from_segments(
        K3_WEIGHT, K3_RANK, [(1 - step, h.value), (1, K3_RANK - 2 * h.value), (1 + step, h.value)]
    )


def all_k3_polygons() -> List[NewtonPolygon]:
    """The eleven polygons of heights 1..10 and infinity, in that order."""
    return [newton_from_height(h) for h in range(1, MAX_FINITE_HEIGHT + 1)] + [newton_from_height(INFINITE)]


class NewtonClass(enum.Enum):
    ORDINARY = "ordinary"
    FINITE_HEIGHT = "finite_height"
    SUPERSINGULAR = "supersingular"


@dataclass(frozen=True)
class Classification:
    kind: NewtonClass
    height: HeightValue

    def to_dict(self) -> dict:
        return {"class": self.kind.value, "height": self.height.to_json()}


def classify(newton: NewtonPolygon) -> Classification:
    height = height_of(newton)
    if height.is_infinite:
        kind = NewtonClass.SUPERSINGULAR
    elif height.value == 1:
        kind = NewtonClass.ORDINARY
    else:
        kind = NewtonClass.FINITE_HEIGHT
    return Classification(kind, height)


@dataclass(frozen=True)
class ArtinInvariant:
    sigma0: int

    def __post_init__(self):
        if not (isinstance(self.sigma0, int) and 1 <= self.sigma0 <= MAX_ARTIN_INVARIANT):
            raise OutOfRange(f"The Artin invariant lies in 1..{MAX_ARTIN_INVARIANT}, got {self.sigma0!r}.")


def artin_from_discriminant_valuation(v: int) -> ArtinInvariant:
    """sigma0 from ord_p of the Neron-Severi discriminant, which equals 2 * sigma0."""
    if v < 0:
        raise OutOfRange(f"A p-adic valuation of a discriminant is non-negative, got {v}.")
    if v % 2:
        raise OddValuation(f"ord_p of the discriminant must be even, got {v}.")
    if not 1 <= v // 2 <= MAX_ARTIN_INVARIANT:
        raise OutOfRange(f"Valuation {v} gives sigma0 = {v // 2}, outside 1..{MAX_ARTIN_INVARIANT}.")
    return ArtinInvariant(v // 2)


class StratumKind(enum.Enum):
    M = "M"
    SIGMA = "Sigma"


LAST_POSITION: int = 19


@functools.total_ordering
@dataclass(frozen=True)
class StratumLabel:
    """
    One of the 20 strata. M(11) is stored as Sigma(1). `strict` means "in this stratum
    but not the next one" and is dropped for Sigma(10), which has no successor.
    """

    kind: StratumKind
    index: int
    strict: bool = False
    position: int = field(init=False, compare=False)

    def __post_init__(self):
        limit = MAX_FINITE_HEIGHT + 1 if self.kind is StratumKind.M else MAX_ARTIN_INVARIANT
        if not 1 <= self.index <= limit:
            raise OutOfRange(f"{self.kind.value}({self.index}) is not a stratum.")
        if self.kind is StratumKind.M and self.index == MAX_FINITE_HEIGHT + 1:
            object.__setattr__(self, "kind", StratumKind.SIGMA)
            object.__setattr__(self, "index", 1)
        position = self.index - 1 if self.kind is StratumKind.M else MAX_FINITE_HEIGHT - 1 + self.index
        object.__setattr__(self, "position", position)
        if position == LAST_POSITION:
            object.__setattr__(self, "strict", False)

    @classmethod
    def at(cls, position: int, strict: bool = False) -> "StratumLabel":
        if position < MAX_FINITE_HEIGHT:
            return cls(StratumKind.M, position + 1, strict)
        return cls(StratumKind.SIGMA, position - MAX_FINITE_HEIGHT + 1, strict)

    def name(self) -> str:
        return f"{self.kind.value}({self.index})"

    def contains(self, other: "StratumLabel") -> bool:
        """Closed strata are nested: a point labelled `other` lies in self iff it is no earlier."""
        return other.position >= self.position

    def __lt__(self, other: "StratumLabel") -> bool:
        if not isinstance(other, StratumLabel):
            return NotImplemented
        return (self.position, self.strict) < (other.position, other.strict)

    def __str__(self):
        if self.strict:
            return f"{self.name()} \\ {StratumLabel.at(self.position + 1).name()}"
        return self.name()

    def to_dict(self) -> dict:
        return {"stratum": self.name(), "strict": self.strict, "position": self.position, "label": str(self)}


def all_strata() -> List[StratumLabel]:
    """The 20 closed strata in filtration order."""
    return [StratumLabel.at(position) for position in range(LAST_POSITION + 1)]


def stratum_of(h: Union[HeightValue, int, str], sigma0: Optional[Union[ArtinInvariant, int]] = None) -> StratumLabel:
    """
    The stratum a K3 surface of height h (and Artin invariant sigma0 when supersingular)
    lies in but does not leave for the next one.

    Raises:
        MissingArtinInvariant: h infinite without sigma0.
        UnexpectedArtinInvariant: h finite with sigma0.
    """
    h = as_height(h)
    if isinstance(sigma0, int):
        sigma0 = ArtinInvariant(sigma0)

    if h.is_infinite:
        if sigma0 is None:
            raise MissingArtinInvariant("A supersingular point needs its Artin invariant to be placed in a Sigma stratum.")
        return StratumLabel(StratumKind.SIGMA, MAX_ARTIN_INVARIANT + 1 - sigma0.sigma0, strict=True)

    if sigma0 is not None:
        raise UnexpectedArtinInvariant(f"Height {h} is finite; the Artin invariant is only defined for supersingular surfaces.")
    return StratumLabel(StratumKind.M, h.value, strict=True)
