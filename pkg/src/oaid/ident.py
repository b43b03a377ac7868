"""Identification queries on a fixed selection model."""
from dataclasses import dataclass
from fractions import Fraction

from . import ratlin
from .space import indicator_matrix

DEFAULT_CUBE_CAP = 1 << 20


@dataclass(frozen=True)
class BinaryCombination:
    t: int
    alpha: tuple
    c: tuple


@dataclass(frozen=True)
class BinaryCollection:
    t_prime: int
    t: int
    alpha_t_prime: tuple
    alpha_t: tuple
    c: tuple


def _is_binary(v):
    return all(x == 0 or x == 1 for x in v)


def binary_vertices(basis, width):
    """Nonzero 0/1 vectors in the span of ``basis`` (sorted).

    A vector of the span is fixed by its entries on the pivot columns of the
    reduced basis, so only 2^rank candidates need checking.
    """
    if not basis:
        return []
    red, r, piv = ratlin.rref(basis)
    out = []
    for bits in range(1, 1 << r):
        v = [Fraction(0)] * width
        for i in range(r):
            if bits >> i & 1:
                v = [a + b for a, b in zip(v, red[i])]
        if _is_binary(v):
            out.append(tuple(int(x) for x in v))
    return sorted(out)


def binary_vertices_bruteforce(m, cap=DEFAULT_CUBE_CAP):
    """Same as binary_vertices on rowspace(m) but by testing every cube vertex."""
    width = len(m[0])
    if (1 << width) > cap:
        raise ValueError("2^%d cube vertices exceed the cap" % width)
    r = ratlin.rank(m)
    out = []
    for bits in range(1, 1 << width):
        c = [bits >> j & 1 for j in range(width)]
        if ratlin.rank(list(m) + [c]) == r:
            out.append(tuple(c))
    return sorted(out)


def _check_cap(model, cap):
    if (1 << len(model.groups)) > cap:
        raise ValueError("2^%d cube vertices exceed the cap" % len(model.groups))


def binary_combinations(model, t, cap=DEFAULT_CUBE_CAP):
    """All binary combinations for treatment t, one witness alpha per c."""
    _check_cap(model, cap)
    a = indicator_matrix(model, t)
    out = []
    for c in binary_vertices(a, len(model.groups)):
        alpha = ratlin.rowspace_solve(a, c)
        out.append(BinaryCombination(t, tuple(alpha), c))
    return out


def collection_c_basis(model, t_prime, t):
    """Basis of {alpha_t'' A^[t'] : alpha_t'' A^[t'] = alpha_t' A^[t]}."""
    a1 = indicator_matrix(model, t_prime)
    a0 = indicator_matrix(model, t)
    n = len(a1)
    ns = ratlin.nullspace_basis(a1 + a0)
    vecs = [ratlin.vecmat(v[:n], a1) for v in ns]
    vecs = [v for v in vecs if any(v)]
    if not vecs:
        return []
    red, r, _ = ratlin.rref(vecs)
    return red[:r]


def binary_collections(model, t_prime, t, cap=DEFAULT_CUBE_CAP):
    """Binary collections for the pair (t', t), via the stacked left nullspace."""
    k = model.spec.n_treatments
    if t_prime == t or not (0 <= t_prime < k and 0 <= t < k):
        raise ValueError("invalid treatment pair (%r, %r)" % (t_prime, t))
    _check_cap(model, cap)
    a1 = indicator_matrix(model, t_prime)
    a0 = indicator_matrix(model, t)
    out = []
    for c in binary_vertices(collection_c_basis(model, t_prime, t), len(model.groups)):
        alpha1 = ratlin.rowspace_solve(a1, c)
        alpha0 = ratlin.rowspace_solve(a0, c)
        out.append(BinaryCollection(t_prime, t, tuple(alpha1), tuple(alpha0), c))
    return out


def alpha_from_c(model, t, c):
    """Coefficients through the pseudoinverse of A^[t] with dependent rows dropped.

    Returns None when c is not in the row space.  Dropped rows get 0.
    """
    a = indicator_matrix(model, t)
    # rows of A^[t] that are independent = pivot columns of its transpose
    _, r, piv = ratlin.rref(ratlin.transpose(ratlin.as_matrix(a)))
    alpha = [Fraction(0)] * len(a)
    if r == 0:
        return None if any(c) else alpha
    b = [a[i] for i in piv]
    bplus = ratlin.pinv_full_row_rank(b)
    for k, z in enumerate(piv):
        alpha[z] = sum((Fraction(bplus[g][k]) * c[g] for g in range(len(c))), Fraction(0))
    if ratlin.vecmat(alpha, a) != [Fraction(x) for x in c]:
        return None
    return alpha


def complement_alpha(model, alpha):
    """For binary treatment: the collection (alpha, -alpha) when alpha sums to zero."""
    if model.spec.n_treatments != 2:
        raise ValueError("complement coefficients need a binary treatment")
    alpha = tuple(Fraction(x) for x in alpha)
    c = ratlin.vecmat(alpha, indicator_matrix(model, 1))
    if not _is_binary(c):
        raise ValueError("alpha does not give a binary combination for t=1")
    if sum(alpha) != 0:
        return None
    return BinaryCollection(1, 0, alpha, tuple(-x for x in alpha), tuple(int(x) for x in c))


def rowspace_intersection_dim(m1, m2):
    return ratlin.rank(m1) + ratlin.rank(m2) - ratlin.rank(list(m1) + list(m2))


def melo_winter_cap(model, t_prime, t):
    """2^k with k the dimension of rowspace(A^[t']) meet rowspace(A^[t])."""
    a1 = indicator_matrix(model, t_prime)
    a0 = indicator_matrix(model, t)
    return 1 << rowspace_intersection_dim(a1, a0)


def check_combination(model, combo):
    a = indicator_matrix(model, combo.t)
    v = ratlin.vecmat(list(combo.alpha), a)
    return v == [Fraction(x) for x in combo.c] and _is_binary(combo.c) and any(combo.c)


def check_collection(model, coll):
    """True when both coefficient vectors reproduce the same nonzero 0/1 vector c."""
    c = [Fraction(x) for x in coll.c]
    v1 = ratlin.vecmat(list(coll.alpha_t_prime), indicator_matrix(model, coll.t_prime))
    v0 = ratlin.vecmat(list(coll.alpha_t), indicator_matrix(model, coll.t))
    return coll.t_prime != coll.t and v1 == c and v0 == c and _is_binary(coll.c) and any(coll.c)
