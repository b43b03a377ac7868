"""The classic two-instrument, binary-treatment model with never-takers,
always-takers and compliers, worked from the selection matrix to numbers.

    python3 demos/late_walkthrough.py
"""
from fractions import Fraction

from oaid import ident, ratlin, verify
from oaid.estimand import build_mean_estimand, build_te_estimand, render_formula
from oaid.space import LATE, indicator_matrix

NAMES = ["never-taker", "always-taker", "complier"]


def show(title, rows):
    print(title)
    for r in rows:
        print("   ", " ".join("%2s" % x for x in r))


def main():
    print("groups:", ", ".join("%s %s" % (n, g) for n, g in zip(NAMES, LATE.groups)))
    show("A (treatment taken at z=0, z=1):", LATE.rows)
    for t in (0, 1):
        show("A^[%d]:" % t, indicator_matrix(LATE, t))
    print()

    # which group means are pinned down by the observables?
    for t in (0, 1):
        print("binary combinations for t=%d" % t)
        for combo in ident.binary_combinations(LATE, t):
            who = [n for n, x in zip(NAMES, combo.c) if x]
            print("   alpha=%s  c=%s  (%s)" % (list(map(str, combo.alpha)), combo.c, ", ".join(who)))
            print("     ", render_formula(build_mean_estimand(combo)))
    print()

    (coll,) = ident.binary_collections(LATE, 1, 0)
    print("the one effect identified for (t',t)=(1,0) is for c =", coll.c)
    f = build_te_estimand(coll)
    print("   ", render_formula(f))
    print()

    # a population, and what it implies for observables
    lat = verify.latent([Fraction(1, 4), Fraction(1, 4), Fraction(1, 2)], [[1, 2, 4], [5, 7, 3]])
    m = verify.observable_moments(LATE, lat)
    print("population: P(G) =", [str(p) for p in lat.group_probs])
    print("   E[Y(0)|G] =", [str(x) for x in lat.group_means[0]], " E[Y(1)|G] =",
          [str(x) for x in lat.group_means[1]])
    print("observables: E[Y D|Z] =", [str(x) for x in m.yd[1]], " E[D|Z] =", [str(x) for x in m.d[1]])
    r = verify.check_identification(LATE, coll, lat)
    print("estimand = %s, true complier effect = %s, denominator = P(complier) = %s"
          % (r["estimand"], r["target"], r["denominator"]))
    print()

    # the average of Y(1) over everyone is not reachable; show why
    c = (1, 1, 1)
    print("is", c, "in the row space of A^[1]?", ratlin.in_rowspace(indicator_matrix(LATE, 1), c))
    a, b = verify.non_identification_witness(LATE, 1, c, base=lat)
    same = verify.observable_moments(LATE, a) == verify.observable_moments(LATE, b)
    print("two populations with identical observables (%s):" % same)
    for name, x in (("first", a), ("second", b)):
        print("   %-6s E[Y(1)|G] = %-20s E[Y(1)] = %s" % (
            name, [str(v) for v in x.group_means[1]], verify.target_parameter(x, c, 1)))
    print()

    # with a constant treatment effect, a different assumption recovers both means
    delta = 2
    flat = verify.latent(lat.group_probs, [lat.group_means[0], [y + delta for y in lat.group_means[0]]])
    sigma, y = verify.nsog_system(LATE, flat, [Fraction(1, 2), Fraction(1, 2)])
    ey = verify.nsog_means(sigma, y)
    print("constant effect %d: recovered E[Y(0)], E[Y(1)] = %s, %s" % (delta, ey[0], ey[1]))


if __name__ == "__main__":
    main()
