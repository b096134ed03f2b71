# Adds the local k3strata source code to path, so that version is imported
import os, sys
sys.path.append(os.path.join(os.path.dirname(__file__), "../../"))
from collections import Counter

import k3strata
from k3strata.config import settings_workers
from k3strata.errors import SingularCurve
from k3strata.fieldarith import classify_kummer_of_product, count_points_batch


def curves_over(p, bound):
    curves = []
    for a in range(bound):
        for b in range(bound):
            try:
                curves.append(k3strata.EllipticCurveData.create(p, a, b))
            except SingularCurve:
                continue
    return curves


@k3strata.unlock("config.yaml")
def main(settings):
    for p in settings.survey.primes:
        curves = curves_over(p, settings.survey.coefficient_bound)
        counts = count_points_batch(curves, settings_workers(settings))
        supersingular = [curve for curve, frob in zip(curves, counts) if frob.supersingular]
        ordinary = [curve for curve, frob in zip(curves, counts) if not frob.supersingular]
        print(f"F_{p}: {len(curves)} curves, {len(supersingular)} supersingular")

        strata = Counter()
        for e1 in (ordinary[:1] + supersingular[:1]):
            for e2 in (ordinary[:1] + supersingular[:1]):
                strata[str(classify_kummer_of_product(e1, e2).stratum)] += 1
        for label, count in sorted(strata.items()):
            print(f"  {label}: {count}")


if __name__ == "__main__":
    main()
