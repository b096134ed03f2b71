"""
Sums of sixteen squares and the polarization degrees they reach.

A family of Kummer polarizations with fixed n produces degrees d = 2 n^2 d' - s where s
runs over sums of sixteen squares n_j^2 with bounded parts. Every large d is reached as
soon as the sums hit every residue class modulo 2 n^2. Both the sums and the residues
are computed by layered dynamic programming over dense numpy bit vectors; each layer
adds one part, and witnesses are recovered by walking the layers backwards.
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .config import Config, load_settings
from .errors import CoverageError, IncompleteResidueCoverage, PartBoundEmpty
from .instantiate import instantiate, is_instantiatable
from .kummer import (
    NUM_PARTS,
    AmplenessReport,
    AmplenessVariant,
    KummerParams,
    NonProduct,
    audit_printed_slopes,
    check_ampleness,
    minimal_dprime,
)
from .parallel import parallel_map

logger = logging.getLogger(__name__)

LEMMA_N: int = 9
LEMMA_MODULUS: int = 2 * LEMMA_N ** 2
LEMMA_PART_BOUND: int = 4

REMARK_N_MIN: int = 9
REMARK_N_MAX: int = 45

Layers = Tuple[np.ndarray, ...]


def _check_shape(k: int, max_part: int) -> None:
    if k < 1 or max_part < 1:
        raise CoverageError(f"Need at least one part and a positive part bound, got k={k}, B={max_part}.")


def _sum_layers(k: int, max_part: int) -> Layers:
    size = k * max_part ** 2 + 1
    layer = np.zeros(size, dtype=bool)
    layer[0] = True
    layers = [layer]
    for _ in range(k):
        previous, current = layers[-1], np.zeros(size, dtype=bool)
        for v in range(1, max_part + 1):
            square = v * v
            current[square:] |= previous[:size - square]
        layers.append(current)
    return tuple(layers)


def _residue_layers(modulus: int, k: int, max_part: int) -> Layers:
    layer = np.zeros(modulus, dtype=bool)
    layer[0] = True
    layers = [layer]
    for _ in range(k):
        previous, current = layers[-1], np.zeros(modulus, dtype=bool)
        for v in range(1, max_part + 1):
            current |= np.roll(previous, (v * v) % modulus)
        layers.append(current)
    return tuple(layers)


def _walk_back(layers: Layers, target: int, max_part: int, step_back: Callable[[int, int], int]) -> Tuple[int, ...]:
    """
    Recover parts (v_1, ..., v_k) reaching target in the last layer. At each layer the
    smallest admissible part is taken.
    """
    parts: List[int] = []
    position = target
    for t in range(len(layers) - 1, 0, -1):
        for v in range(1, max_part + 1):
            previous = step_back(position, v * v)
            if 0 <= previous < len(layers[t - 1]) and layers[t - 1][previous]:
                parts.append(v)
                position = previous
                break
        else:
            raise CoverageError(f"{target} is not reachable; no predecessor in layer {t}.")
    return tuple(reversed(parts))


@dataclass(frozen=True)
class SumSet:
    """All sums of `parts` squares v^2 with 1 <= v <= max_part."""

    parts: int
    max_part: int
    reachable: FrozenSet[int]
    layers: Layers = field(repr=False, compare=False)

    @property
    def min(self) -> int:
        return min(self.reachable)

    @property
    def max(self) -> int:
        return max(self.reachable)

    def __contains__(self, value: int) -> bool:
        return value in self.reachable

    def __len__(self) -> int:
        return len(self.reachable)

    def sorted(self) -> List[int]:
        return sorted(self.reachable)

    def witness(self, value: int) -> Tuple[int, ...]:
        if value not in self.reachable:
            raise CoverageError(f"{value} is not a sum of {self.parts} squares with parts in [1, {self.max_part}].")
        return _walk_back(self.layers, value, self.max_part, lambda s, square: s - square)


def reachable_sums(k: int, max_part: int) -> SumSet:
    _check_shape(k, max_part)
    layers = _sum_layers(k, max_part)
    reachable = frozenset(int(s) for s in np.flatnonzero(layers[-1]))
    logger.debug("sums of %d squares with parts <= %d: %d values in [%d, %d]", k, max_part, len(reachable), k, k * max_part ** 2)
    return SumSet(k, max_part, reachable, layers)


def witness_for_sum(k: int, max_part: int, value: int) -> Tuple[int, ...]:
    return reachable_sums(k, max_part).witness(value)


@dataclass(frozen=True)
class ResidueSet:
    modulus: int
    members: FrozenSet[int]

    @property
    def is_full(self) -> bool:
        return len(self.members) == self.modulus

    def missing(self) -> List[int]:
        return [r for r in range(self.modulus) if r not in self.members]

    def to_dict(self) -> dict:
        return {
            "modulus": self.modulus,
            "count": len(self.members),
            "full": self.is_full,
            "members": sorted(self.members),
            "missing": self.missing(),
        }


def reachable_residues(modulus: int, k: int, max_part: int, method: str = "dp") -> ResidueSet:
    """
    Residues modulo `modulus` of sums of k squares with parts in [1, max_part].

    Args:
        method (str): "dp" runs the dynamic program on Z/modulus directly, "sums" reduces
            the exact sum set. Both give the same answer.
    """
    if modulus < 1:
        raise CoverageError(f"The modulus must be positive, got {modulus}.")
    _check_shape(k, max_part)

    if method == "dp":
        members = frozenset(int(r) for r in np.flatnonzero(_residue_layers(modulus, k, max_part)[-1]))
    elif method == "sums":
        members = frozenset(s % modulus for s in reachable_sums(k, max_part).reachable)
    else:
        raise CoverageError(f"Unknown residue method '{method}'; use 'dp' or 'sums'.")
    return ResidueSet(modulus, members)


def residue_witnesses(modulus: int, k: int, max_part: int) -> Dict[int, Tuple[int, ...]]:
    """One tuple of parts per reachable residue class."""
    layers = _residue_layers(modulus, k, max_part)
    return {
        int(r): _walk_back(layers, int(r), max_part, lambda s, square: (s - square) % modulus)
        for r in np.flatnonzero(layers[-1])
    }


def verify_lemma_res(max_part: int = LEMMA_PART_BOUND, modulus: int = LEMMA_MODULUS) -> bool:
    """Whether sixteen squares with parts in [1, max_part] hit every residue modulo 2 * 9^2."""
    return reachable_residues(modulus, NUM_PARTS, max_part).is_full


def remark_part_bound(n: int) -> int:
    """Largest integer part strictly below n / 2."""
    return (n - 1) // 2


def verify_remark(n: int) -> bool:
    """
    Whether sixteen squares with parts 1 <= n_j < n/2 hit every residue modulo 2 n^2.

    Raises:
        PartBoundEmpty: For n < 3, where no part satisfies 1 <= n_j < n/2.
    """
    if n < 3:
        raise PartBoundEmpty(f"For n = {n} there is no integer part with 1 <= n_j < n/2.")
    return reachable_residues(2 * n * n, NUM_PARTS, remark_part_bound(n)).is_full


def verify_remark_range(n_min: int, n_max: int, workers: Optional[int] = 0) -> Dict[int, bool]:
    """
    verify_remark over n_min..n_max as a parallel map.

    Raises:
        CoverageError: If the range is empty.
    """
    if n_max < n_min:
        raise CoverageError(f"Empty range of n: {n_min}..{n_max}.")
    ns = list(range(n_min, n_max + 1))
    results = dict(zip(ns, parallel_map(verify_remark, ns, workers)))
    logger.debug("remark verified for %d values of n, %d failures", len(ns), sum(not ok for ok in results.values()))
    return results


@dataclass(frozen=True)
class CoverageResult:
    """
    Degrees reached by one family d = 2 n^2 d' - s, d' >= dprime_min.

    `threshold` is the guaranteed bound 2 n^2 dprime_min - min(s): from there on every
    degree in the covered congruence classes (all of them when step is 1) is reached.
    `exact_threshold` is the least degree from which that holds, which can be lower.
    """

    family: str
    n: int
    dprime_min: int
    part_bound: Optional[int]
    modulus: int
    step: int
    threshold: int
    exact_threshold: int
    witnesses: Dict[int, Tuple[int, ...]] = field(compare=False)
    variant: Optional[AmplenessVariant] = None
    computed_dprime_min: Optional[int] = None
    computed_threshold: Optional[int] = None

    @property
    def witness_count(self) -> int:
        return len(self.witnesses)

    def degree_classes(self) -> List[int]:
        """Residues of d modulo 2 n^2 covered by the family."""
        return sorted((-r) % self.modulus for r in self.witnesses)

    def validate(self) -> None:
        """Re-evaluate every witness against its residue and the part bound."""
        for residue, parts in self.witnesses.items():
            if len(parts) != NUM_PARTS or min(parts) < 1:
                raise CoverageError(f"Witness {parts} for residue {residue} is not sixteen positive parts.")
            if self.part_bound is not None and max(parts) > self.part_bound:
                raise CoverageError(f"Witness {parts} for residue {residue} exceeds the part bound {self.part_bound}.")
            if sum(v * v for v in parts) % self.modulus != residue:
                raise CoverageError(f"Witness {parts} does not realise residue {residue} modulo {self.modulus}.")

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "n": self.n,
            "dprime_min": self.dprime_min,
            "part_bound": self.part_bound,
            "modulus": self.modulus,
            "step": self.step,
            "threshold": self.threshold,
            "exact_threshold": self.exact_threshold,
            "variant": self.variant.to_dict() if self.variant is not None else None,
            "computed_dprime_min": self.computed_dprime_min,
            "computed_threshold": self.computed_threshold,
            "witness_count": self.witness_count,
            "witnesses": {r: list(parts) for r, parts in sorted(self.witnesses.items())},
        }

    def to_row(self) -> dict:
        return {
            "family": self.family,
            "n": self.n,
            "dprime_min": self.dprime_min,
            "part_bound": self.part_bound,
            "threshold": self.threshold,
            "witness_count": self.witness_count,
        }


def _exact_threshold(modulus: int, dprime_min: int, largest_sum: Mapping[int, int]) -> int:
    # In the class of d matching residue r, the least reachable degree uses the largest sum.
    lowest = {(-r) % modulus: modulus * dprime_min - s for r, s in largest_sum.items()}
    start = max(lowest.values()) - modulus + 1
    return min(start + (d - start) % modulus for d in lowest.values())


def coverage_threshold(
    n: int,
    dprime_min: int,
    max_part: int,
    variant: AmplenessVariant = NonProduct(),
    family: str = "general",
) -> CoverageResult:
    """
    The degree from which 2 n^2 d' - sum n_j^2 (d' >= dprime_min, 1 <= n_j <= max_part)
    reaches every integer, with one witness per residue class modulo 2 n^2.

    Raises:
        IncompleteResidueCoverage: If some residue modulo 2 n^2 is out of reach.
    """
    modulus = 2 * n * n
    residues = reachable_residues(modulus, NUM_PARTS, max_part)
    if not residues.is_full:
        raise IncompleteResidueCoverage(modulus, residues.missing())

    sums = reachable_sums(NUM_PARTS, max_part)
    largest_sum: Dict[int, int] = {}
    for s in sorted(sums.reachable, reverse=True):
        largest_sum.setdefault(s % modulus, s)

    computed = minimal_dprime(n, (max_part,) * NUM_PARTS, variant)
    result = CoverageResult(
        family=family,
        n=n,
        dprime_min=dprime_min,
        part_bound=max_part,
        modulus=modulus,
        step=1,
        threshold=modulus * dprime_min - sums.min,
        exact_threshold=_exact_threshold(modulus, dprime_min, largest_sum),
        witnesses=residue_witnesses(modulus, NUM_PARTS, max_part),
        variant=variant,
        computed_dprime_min=computed,
        computed_threshold=modulus * computed - sums.min if computed is not None else None,
    )
    result.validate()
    return result


def fixed_parts_threshold(
    n: int,
    dprime_min: int,
    parts: Sequence[int],
    variant: Optional[AmplenessVariant] = None,
    family: str = "fixed",
) -> CoverageResult:
    """
    A family with one fixed tuple of parts reaches the single congruence class of
    -sum n_j^2 modulo 2 n^2, in steps of 2 n^2, from 2 n^2 dprime_min - sum n_j^2 on.
    """
    parts = tuple(parts)
    KummerParams(n, dprime_min, parts)  # validates
    modulus = 2 * n * n
    s = sum(v * v for v in parts)
    computed = minimal_dprime(n, parts, variant) if variant is not None else None
    result = CoverageResult(
        family=family,
        n=n,
        dprime_min=dprime_min,
        part_bound=None,
        modulus=modulus,
        step=modulus,
        threshold=modulus * dprime_min - s,
        exact_threshold=modulus * dprime_min - s,
        witnesses={s % modulus: parts},
        variant=variant,
        computed_dprime_min=computed,
        computed_threshold=modulus * computed - s if computed is not None else None,
    )
    result.validate()
    return result


def achievable_degrees(
    n: int,
    dprime_range: Tuple[int, int],
    max_part: Optional[int] = None,
    parts: Optional[Sequence[int]] = None,
    parity: Optional[str] = None,
    p: Optional[int] = None,
) -> List[int]:
    """
    All positive d = 2 n^2 d' - s with d' in the inclusive range and s either a sum of
    sixteen squares with parts up to max_part or the sum for one fixed tuple of parts.
    Ampleness is not checked here.

    Args:
        parity (str): "even" or "odd" keeps only degrees of that parity.
        p (int): Keeps only degrees prime to p.
    """
    low, high = dprime_range
    if low < 1 or low > high:
        raise CoverageError(f"Malformed d' range [{low}, {high}].")
    if parts is not None:
        sums: Iterable[int] = [sum(v * v for v in parts)]
    elif max_part is not None:
        sums = reachable_sums(NUM_PARTS, max_part).sorted()
    else:
        raise CoverageError("Give either a part bound or a fixed tuple of parts.")
    if parity not in (None, "even", "odd"):
        raise CoverageError(f"Parity must be 'even' or 'odd', got '{parity}'.")

    modulus = 2 * n * n
    degrees = {modulus * dprime - s for dprime in range(low, high + 1) for s in sums}
    degrees = {d for d in degrees if d > 0}
    if parity is not None:
        degrees = {d for d in degrees if d % 2 == (parity == "odd")}
    if p is not None:
        degrees = {d for d in degrees if d % p}
    return sorted(degrees)


@dataclass(frozen=True)
class Family:
    """One parameter family of Kummer polarizations, as declared in the settings."""

    name: str
    n: int
    dprime_min: int
    variant: AmplenessVariant
    part_bound: Optional[int] = None
    parts: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if (self.part_bound is None) == (self.parts is None):
            raise CoverageError(f"Family '{self.name}' needs exactly one of 'part_bound' or 'parts'.")

    @classmethod
    def from_config(cls, name: str, node: Union[Config, Mapping]) -> "Family":
        data = node.to_dict() if isinstance(node, Config) else dict(node)
        variant = data.get("variant", {"_instance_": "k3strata.kummer.GeneralSurface"})
        if is_instantiatable(variant):
            variant = instantiate(variant)
        parts = data.get("parts")
        if "n" not in data or "dprime_min" not in data:
            raise CoverageError(f"Family '{name}' must declare 'n' and 'dprime_min'.")
        return cls(
            name=name,
            n=data["n"],
            dprime_min=data["dprime_min"],
            variant=variant,
            part_bound=data.get("part_bound"),
            parts=tuple(parts) if parts is not None else None,
        )

    def worst_parts(self) -> Tuple[int, ...]:
        return self.parts if self.parts is not None else (self.part_bound,) * NUM_PARTS

    def coverage(self) -> CoverageResult:
        if self.parts is not None:
            return fixed_parts_threshold(self.n, self.dprime_min, self.parts, self.variant, self.name)
        return coverage_threshold(self.n, self.dprime_min, self.part_bound, self.variant, self.name)

    def audit(self) -> AmplenessReport:
        """Ampleness at d' = dprime_min for the largest parts the family uses."""
        return check_ampleness(KummerParams(self.n, self.dprime_min, self.worst_parts()), self.variant)

    def degrees_from(self, start: int, count: int, p: Optional[int] = None) -> List[int]:
        modulus = 2 * self.n * self.n
        largest = sum(v * v for v in self.worst_parts())
        high = self.dprime_min + (2 * count * modulus + largest) // modulus + 2
        degrees = achievable_degrees(self.n, (self.dprime_min, high), self.part_bound, self.parts, p=p)
        return [d for d in degrees if d >= start][:count]


def load_families(families: Union[Config, Mapping, None] = None) -> List[Family]:
    if families is None:
        families = load_settings().families
    items = families.to_dict() if isinstance(families, Config) else dict(families)
    return [Family.from_config(name, node) for name, node in items.items()]


def paper_bounds_report(
    families: Union[Config, Mapping, Iterable[Family], None] = None,
    p: Optional[int] = None,
    sample: int = 10,
) -> dict:
    """
    Thresholds, witnesses and ampleness audits for every configured family, together
    with the audit of the printed p-rank one slopes.

    The prime-to-p filter only affects the sampled degree lists; thresholds are stated
    before that restriction.
    """
    if families is None or isinstance(families, (Config, Mapping)):
        families = load_families(families)

    rows = {}
    for family in families:
        result = family.coverage()
        audit = family.audit()
        if not audit.ample:
            logger.warning(
                "family '%s': parameters n=%d, d'=%d fail the %s bound(s) as implemented",
                family.name, family.n, family.dprime_min, ", ".join(audit.failures()),
            )
        row = result.to_dict()
        row["ampleness"] = audit.to_dict()
        row["sample_degrees"] = family.degrees_from(result.threshold, sample)
        if p is not None:
            row["sample_degrees_prime_to_p"] = family.degrees_from(result.threshold, sample, p=p)
        rows[family.name] = row

    return {"p": p, "families": rows, "printed_slopes_audit": audit_printed_slopes()}


def report_to_rows(report: dict) -> List[dict]:
    columns = ("family", "n", "dprime_min", "part_bound", "threshold", "witness_count")
    return [{column: row[column] for column in columns} for row in report["families"].values()]
