"""
Exception hierarchy for k3strata.

Every error raised on purpose by the library derives from K3StrataError, which itself
is a ValueError so that callers written against plain ValueError keep working. The
command line front end reports the class name verbatim, so names here are part of the
public interface.
"""
from typing import Iterable, Tuple


class K3StrataError(ValueError):
    """Root of all domain errors."""


class ConfigError(K3StrataError):
    pass


class InstantiationError(ConfigError):
    pass


# polygon

class PolygonError(K3StrataError):
    pass


class SlopeOutOfRange(PolygonError):
    pass


class RankMismatch(PolygonError):
    pass


class SymmetryViolation(PolygonError):
    pass


class BreakIntegralityViolation(PolygonError):
    pass


class UnsupportedShape(PolygonError):
    pass


class NonIntegralHeight(PolygonError):
    pass


class EndpointMismatch(PolygonError):
    pass


class MissingArtinInvariant(PolygonError):
    pass


class UnexpectedArtinInvariant(PolygonError):
    pass


class OddValuation(PolygonError):
    pass


class OutOfRange(PolygonError):
    pass


# kummer

class KummerError(K3StrataError):
    pass


class InvalidSlopeProfile(KummerError):
    pass


class InvalidKummerParams(KummerError):
    pass


# coverage

class CoverageError(K3StrataError):
    pass


class PartBoundEmpty(CoverageError):
    pass


class IncompleteResidueCoverage(CoverageError):
    def __init__(self, modulus: int, missing: Iterable[int]):
        self.modulus = modulus
        self.missing: Tuple[int, ...] = tuple(sorted(missing))
        shown = ", ".join(str(r) for r in self.missing[:20])
        if len(self.missing) > 20:
            shown += ", ..."
        super().__init__(
            f"{len(self.missing)} residue class(es) modulo {modulus} are not reachable: {shown}"
        )


# fieldarith

class FieldArithError(K3StrataError):
    pass


class InvalidPrime(FieldArithError):
    pass


class SingularCurve(FieldArithError):
    pass


class FieldMismatch(FieldArithError):
    pass


class HasseBoundViolation(FieldArithError):
    pass
