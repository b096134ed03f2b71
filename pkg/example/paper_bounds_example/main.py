# Adds the local k3strata source code to path, so that version is imported
import os, sys
sys.path.append(os.path.join(os.path.dirname(__file__), "../../"))

import k3strata
from k3strata.coverage import load_families, paper_bounds_report


@k3strata.unlock("config.yaml")
def main(settings):
    families = load_families(settings.families)
    report = paper_bounds_report(families, p=settings.report.p, sample=settings.report.sample_degrees)

    for name, row in report["families"].items():
        print(f"{name}: n={row['n']}, d' >= {row['dprime_min']}, parts <= {row['part_bound']}")
        print("  Guaranteed threshold: ", row["threshold"])
        print("  Exact threshold:      ", row["exact_threshold"])
        print("  Witnesses:            ", row["witness_count"])
        print("  Ample at d'_min:      ", row["ampleness"]["ample"], row["ampleness"]["failures"])
        print("  First degrees:        ", row["sample_degrees"])
        print(f"  Prime to {report['p']}:           ", row["sample_degrees_prime_to_p"])

    audit = report["printed_slopes_audit"]
    print("Printed p-rank one slopes valid: ", audit["printed_valid"], audit["printed_error"])


if __name__ == "__main__":
    main()
