"""Determinants of 0/1 matrices bound the coefficients the search needs.

    python3 demos/spectra.py
"""
import time

from oaid import ratlin


def main():
    for n in range(1, 6):
        t0 = time.perf_counter()
        d = ratlin.determinant_spectrum(n)
        print("D_%d = %s   (%.3f s)" % (n, sorted(d), time.perf_counter() - t0))
    # n=4 is cheap enough to confirm by brute force every time
    t0 = time.perf_counter()
    print("brute force D_4 matches:", ratlin.brute_force_spectrum(4) == ratlin.PUBLISHED_SPECTRA[4],
          "(%.3f s over 65536 matrices)" % (time.perf_counter() - t0))
    print()
    for n in range(2, 5):
        c = ratlin.coefficient_set(n)
        print("C_%d has %d values: %s" % (n, len(c), " ".join(str(x) for x in c)))

    # a 4x5 staircase and its exact pseudoinverse
    b = [[1, 0, 0, 0, 0], [1, 1, 0, 0, 0], [1, 1, 1, 0, 0], [1, 1, 1, 1, 0]]
    print()
    print("pinv of the staircase:")
    for row in ratlin.pinv_full_row_rank(b):
        print("   ", " ".join("%2s" % x for x in row))


if __name__ == "__main__":
    main()
