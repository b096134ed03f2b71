"""
Brute-force reference computations. Slow on purpose: every loop is written the obvious
way so the fast paths in coverage and fieldarith can be checked against them.
"""
import itertools
from fractions import Fraction
from typing import List, Optional, Set, Tuple

from .errors import PolygonError
from .polygon import K3_RANK, K3_WEIGHT, MAX_FINITE_HEIGHT, NewtonPolygon, hodge_k3, lies_above, make_newton


def brute_force_sums(k: int, max_part: int) -> Set[int]:
    return {sum(v * v for v in parts) for parts in itertools.product(range(1, max_part + 1), repeat=k)}


def brute_force_residues(modulus: int, k: int, max_part: int) -> Set[int]:
    return {s % modulus for s in brute_force_sums(k, max_part)}


def brute_force_point_count(p: int, a: int, b: int) -> int:
    """#E(F_p) by testing every (x, y), plus the point at infinity."""
    count = 1
    for x in range(p):
        rhs = (x ** 3 + a * x + b) % p
        count += sum(1 for y in range(p) if (y * y - rhs) % p == 0)
    return count


def brute_force_trace(p: int, a: int, b: int) -> int:
    return p + 1 - brute_force_point_count(p, a, b)


def brute_force_degrees(
    n: int,
    dprime_low: int,
    dprime_high: int,
    sums: Set[int],
    parity: Optional[str] = None,
    p: Optional[int] = None,
) -> List[int]:
    degrees = set()
    for dprime in range(dprime_low, dprime_high + 1):
        for s in sums:
            d = 2 * n * n * dprime - s
            if d <= 0:
                continue
            if parity == "even" and d % 2:
                continue
            if parity == "odd" and d % 2 == 0:
                continue
            if p is not None and d % p == 0:
                continue
            degrees.add(d)
    return sorted(degrees)


def k3_polygons_with_min_slope(alpha: Fraction) -> List[NewtonPolygon]:
    """
    Every valid K3 polygon whose smallest slope is alpha < 1, with slopes restricted to
    alpha, 1 and 2 - alpha, that lie above the K3 Hodge polygon. Used to confirm that a
    height determines its polygon.
    """
    found = []
    for low in range(1, K3_RANK // 2 + 1):
        middle = K3_RANK - 2 * low
        try:
            found.append(make_newton(K3_WEIGHT, K3_RANK, {alpha: low, Fraction(1): middle, 2 - alpha: low}))
        except PolygonError:
            continue
    hodge = hodge_k3()
    return [polygon for polygon in found if polygon.min_slope == alpha and lies_above(polygon, hodge)]


def polygons_per_height() -> List[Tuple[int, int]]:
    """(h, number of valid K3 polygons with smallest slope 1 - 1/h) for h = 1..10."""
    return [(h, len(k3_polygons_with_min_slope(1 - Fraction(1, h)))) for h in range(1, MAX_FINITE_HEIGHT + 1)]


def multiset_sums(k: int, max_part: int) -> Set[int]:
    """Sums of k squares taken over multisets of parts; feasible where B^k tuples are not."""
    return {sum(v * v for v in parts) for parts in itertools.combinations_with_replacement(range(1, max_part + 1), k)}
