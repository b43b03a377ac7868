"""Exact rational linear algebra on small dense matrices.

Matrices are plain lists of row lists holding ``Fraction`` entries.  Every
function accepts ints (or anything ``Fraction`` understands) and returns
fresh ``Fraction`` matrices, so callers never share mutable state.
"""
from fractions import Fraction


class RankDeficientError(ValueError):
    pass


class DimensionError(ValueError):
    pass


def as_matrix(rows):
    rows = [[Fraction(x) for x in r] for r in rows]
    if not rows or not rows[0]:
        raise DimensionError("matrix must be nonempty")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise DimensionError("ragged matrix")
    return rows


def as_vector(v):
    return [Fraction(x) for x in v]


def shape(m):
    return len(m), len(m[0])


def transpose(m):
    return [list(col) for col in zip(*m)]


def matmul(a, b):
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def vecmat(v, m):
    """Row vector times matrix, i.e. the entries of v'm."""
    if len(v) != len(m):
        raise DimensionError("vector length %d does not match %d rows" % (len(v), len(m)))
    out = [Fraction(0)] * len(m[0])
    for coef, row in zip(v, m):
        if coef:
            for j, x in enumerate(row):
                if x:
                    out[j] += coef * x
    return out


def rref(m):
    """Reduced row echelon form.  Returns (reduced, rank, pivot_cols)."""
    a = as_matrix(m)
    nrows, ncols = shape(a)
    pivots = []
    r = 0
    for col in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if a[i][col] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        lead = a[r][col]
        if lead != 1:
            a[r] = [x / lead for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
    return a, r, pivots


def rank(m):
    return rref(m)[1]


def _augmented_solve(m, c):
    # Solve alpha' m = c' through the transposed system m' alpha = c.
    nrows, ncols = shape(m)
    if len(c) != ncols:
        raise DimensionError("c has length %d, expected %d" % (len(c), ncols))
    aug = [list(row) + [cj] for row, cj in zip(transpose(m), c)]
    red, _, piv = rref(aug)
    if nrows in piv:
        return None
    alpha = [Fraction(0)] * nrows
    for i, col in enumerate(piv):
        alpha[col] = red[i][nrows]
    return alpha


def rowspace_solve(m, c):
    """Some alpha with alpha'm = c', or None when c is outside the row space.

    Free coordinates are set to zero, so the answer is deterministic.
    """
    return _augmented_solve(as_matrix(m), as_vector(c))


def in_rowspace(m, c):
    return rowspace_solve(m, c) is not None


def right_nullspace(m):
    """Basis of {v : m v = 0}."""
    red, _, piv = rref(m)
    ncols = len(red[0])
    free = [j for j in range(ncols) if j not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, p in enumerate(piv):
            v[p] = -red[i][f]
        basis.append(v)
    return basis


def nullspace_basis(m):
    """Basis of the left nullspace {alpha : alpha'm = 0}."""
    return right_nullspace(transpose(as_matrix(m)))


def inverse(m):
    a = as_matrix(m)
    n, k = shape(a)
    if n != k:
        raise DimensionError("inverse needs a square matrix")
    aug = [row + e for row, e in zip(a, identity(n))]
    red, r, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise RankDeficientError("matrix is singular")
    return [row[n:] for row in red]


def pinv_full_row_rank(m):
    """Moore-Penrose inverse m'(mm')^{-1} of a full row rank matrix."""
    a = as_matrix(m)
    if rank(a) < len(a):
        raise RankDeficientError("matrix does not have full row rank")
    at = transpose(a)
    return matmul(at, inverse(matmul(a, at)))


def determinant(m):
    """Bareiss fraction-free elimination.  Integer input stays integral."""
    a = [list(r) for r in m]
    n = len(a)
    if any(len(r) != n for r in a):
        raise DimensionError("determinant needs a square matrix")
    if n == 0:
        return Fraction(1)
    integral = all(isinstance(x, int) or (isinstance(x, Fraction) and x.denominator == 1) for r in a for x in r)
    if integral:
        a = [[int(x) for x in r] for r in a]
        return Fraction(_bareiss_int(a))
    a = as_matrix(a)
    sign, prev = 1, Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            p = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if p is None:
                return Fraction(0)
            a[k], a[p] = a[p], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _bareiss_int(a):
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            p = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if p is None:
                return 0
            a[k], a[p] = a[p], a[k]
            sign = -sign
        akk = a[k][k]
        rk = a[k]
        for i in range(k + 1, n):
            ri = a[i]
            aik = ri[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * akk - aik * rk[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


# Published spectra, used for sizes beyond the brute-force limit.  Each is the
# full integer range -b..b.
PUBLISHED_SPECTRA = {n: frozenset(range(-b, b + 1)) for n, b in
                     {1: 1, 2: 1, 3: 2, 4: 3, 5: 5, 6: 8}.items()}

BRUTE_FORCE_LIMIT = 4


def _spectrum_chunk(args):
    # Expand along the first row: for fixed lower rows the determinant is a
    # subset sum of the cofactors, one subset per 0/1 first row.
    n, lo, hi = args
    found = set()
    for code in range(lo, hi):
        lower = [[(code >> (i * n + j)) & 1 for j in range(n)] for i in range(n - 1)]
        cof = []
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for row in lower]
            d = _bareiss_int(minor) if minor else 1
            cof.append(d if j % 2 == 0 else -d)
        sums = {0}
        for x in cof:
            if x:
                sums |= {s + x for s in sums}
        found |= sums
    return found


def brute_force_spectrum(n, workers=1):
    """Determinants of all n x n 0/1 matrices, closed under negation.

    For n >= 2 a row swap already negates, so the closure only matters for
    n = 1, where it adds -1 to the attained {0, 1}.
    """
    total = 1 << (n * (n - 1))
    if workers <= 1 or total < (1 << 12):
        found = _spectrum_chunk((n, 0, total))
        return frozenset(found | {-d for d in found})
    from concurrent.futures import ProcessPoolExecutor
    step = -(-total // (workers * 8))
    chunks = [(n, lo, min(lo + step, total)) for lo in range(0, total, step)]
    found = set()
    with ProcessPoolExecutor(workers) as pool:
        for part in pool.map(_spectrum_chunk, chunks):
            found |= part
    return frozenset(found | {-d for d in found})


def determinant_spectrum(n, brute_force_limit=BRUTE_FORCE_LIMIT, workers=1):
    """D_n, the set of determinants attained by n x n 0/1 matrices.

    Sizes up to ``brute_force_limit`` (at most 5) are enumerated; larger
    sizes come from the published table.
    """
    if not 1 <= n <= 6:
        raise ValueError("n must be between 1 and 6")
    if n <= min(brute_force_limit, 5):
        return brute_force_spectrum(n, workers)
    return PUBLISHED_SPECTRA[n]


def coefficient_set(n, **kw):
    """C_n = {a/b : a, b in D_n, b != 0} as a sorted list of Fractions."""
    d = determinant_spectrum(n, **kw)
    return sorted({Fraction(a, b) for a in d for b in d if b != 0})
