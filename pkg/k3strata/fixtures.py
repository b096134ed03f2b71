"""
Regenerate the derived example values that tests compare against. Every value comes
from the brute-force oracles except the computed threshold, which chains the kummer
audit into the coverage solver.
"""
import json
import logging
import os

from .coverage import coverage_threshold
from .kummer import NUM_PARTS, NonProduct, minimal_dprime_for_bound
from .oracles import (
    brute_force_degrees,
    brute_force_point_count,
    brute_force_residues,
    brute_force_sums,
    brute_force_trace,
    multiset_sums,
    polygons_per_height,
)

logger = logging.getLogger(__name__)

FIXTURE_FILE: str = "derived.json"

CURVES = ((7, 1, 0), (5, 0, 1), (5, 1, 1))


def derived_values() -> dict:
    dprime = minimal_dprime_for_bound(9, 4, NonProduct())
    coprime = brute_force_degrees(9, 26, 26, multiset_sums(NUM_PARTS, 4), p=5)
    return {
        "reachable_sums_2_2": sorted(brute_force_sums(2, 2)),
        "reachable_residues_7_2_2": sorted(brute_force_residues(7, 2, 2)),
        "lemma_res_part_bound_3": len({s % 162 for s in multiset_sums(NUM_PARTS, 3)}) == 162,
        "remark_n_4": len({s % 32 for s in multiset_sums(NUM_PARTS, 1)}) == 32,
        "computed_dprime_min_9_4": dprime,
        "computed_threshold_9_4": coverage_threshold(9, dprime, 4).threshold,
        "sums_16_4_count": len(multiset_sums(NUM_PARTS, 4)),
        "degrees_9_26_4_prime_to_5": {"count": len(coprime), "degrees": coprime},
        "point_counts": [
            {"p": p, "a": a, "b": b, "count": brute_force_point_count(p, a, b), "trace": brute_force_trace(p, a, b)}
            for p, a, b in CURVES
        ],
        "polygons_per_height": [list(pair) for pair in polygons_per_height()],
    }


def seed_fixtures(directory: str) -> str:
    """
    Write every derived value to `<directory>/derived.json`.

    Returns:
        str: The path written.
    """
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, FIXTURE_FILE)
    values = derived_values()
    with open(path, "w") as handle:
        json.dump(values, handle, indent=2, sort_keys=True)
        handle.write("\n")
    logger.info("wrote %d derived fixtures to %s", len(values), path)
    return path
