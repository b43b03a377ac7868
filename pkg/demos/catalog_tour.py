"""Run the search for the small cases and look at what comes out.

    python3 demos/catalog_tour.py
"""
import time

from oaid import enumer, verify
from oaid.estimand import build_te_estimand, emit_catalog, render_formula
from oaid.space import Spec


def main():
    for k, z in [(2, 2), (3, 2), (2, 3), (3, 3)]:
        spec = Spec(z, k)
        t0 = time.perf_counter()
        cat = enumer.enumerate_catalog(spec)
        secs = time.perf_counter() - t0
        print("%d treatments, %d instrument values: %d models, %d collections (%.2f s)"
              % ((k, z) + enumer.summary_counts(cat) + (secs,)))

    # the coefficient grid depends only on the number of instrument values
    for z in (2, 3):
        print("   coefficient vectors scanned with %d instrument values: %d"
              % (z, enumer._Grid(Spec(z, 2)).total))
    print()

    print(emit_catalog(enumer.enumerate_catalog(Spec(2, 2)), "text"))

    # with three instrument values some effects need all three at once
    cat = enumer.enumerate_catalog(Spec(3, 2))
    e, c = next((e, c) for e in cat.entries for c in e.collections if all(c.alpha_t))
    print(e.sm_id, "rows", e.model.rows)
    print("   ", render_formula(build_te_estimand(c)))
    print()

    # both search strategies agree on the maximal models
    for k, z in [(2, 2), (3, 2), (2, 3)]:
        spec = Spec(z, k)
        same = enumer.record_pairs(enumer.algorithm1_records(spec)) == \
            enumer.record_pairs(enumer.algorithm2_part1(spec))
        print("subset search and coefficient search agree for (%d,%d): %s" % (k, z, same))

    # every listed collection survives the exact oracle
    records = verify.verify_catalog(cat, range(20))
    print("oracle checks on (2,3): %d, failures: %d"
          % (len(records), sum(r["status"] != "pass" for r in records)))

    # how many (2,3) models remain under each notion of "the same model"
    recs = enumer.algorithm2_part1(Spec(3, 2))
    for mode in enumer.DEDUP_MODES:
        print("   dedup %-11s -> %d models, %d collections"
              % ((mode,) + enumer.summary_counts(enumer.algorithm2_part2(recs, Spec(3, 2), mode))))


if __name__ == "__main__":
    main()
