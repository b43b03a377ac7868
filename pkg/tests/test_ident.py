from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from oaid import ident, ratlin
from oaid.space import COMPLIERS_DEFIERS, LATE, SelectionModel, Spec, all_response_types, \
    always_takes, indicator_matrix, model_from_rows

STAIRCASE_MODEL = model_from_rows([[1, 0, 0, 0, 0], [1, 1, 0, 0, 0], [1, 1, 1, 0, 0], [1, 1, 1, 1, 0]], 2)
STAIRCASE_BPLUS = [[1, 0, 0, 0], [-1, 1, 0, 0], [0, -1, 1, 0], [0, 0, -1, 1], [0, 0, 0, 0]]


def cset(items):
    return {x.c for x in items}


@st.composite
def models(draw, max_z=3, max_k=3, max_groups=7):
    z = draw(st.integers(1, max_z))
    k = draw(st.integers(2, max_k))
    types = all_response_types(Spec(z, k))
    idx = draw(st.lists(st.integers(0, len(types) - 1), min_size=1,
                        max_size=min(max_groups, len(types)), unique=True))
    return SelectionModel(Spec(z, k), [types[i] for i in idx])


# -- combinations

def test_late_combinations():
    assert cset(ident.binary_combinations(LATE, 1)) == {(0, 1, 0), (0, 0, 1), (0, 1, 1)}
    assert cset(ident.binary_combinations(LATE, 0)) == {(1, 0, 0), (0, 0, 1), (1, 0, 1)}


def test_compliers_defiers_combinations():
    for t in (0, 1):
        assert cset(ident.binary_combinations(COMPLIERS_DEFIERS, t)) == {(1, 0), (0, 1), (1, 1)}


@given(models())
def test_combinations_match_cube_oracle(m):
    for t in range(m.spec.n_treatments):
        a = indicator_matrix(m, t)
        combos = ident.binary_combinations(m, t)
        assert sorted(cset(combos)) == ident.binary_vertices_bruteforce(a)
        assert len(combos) <= 1 << ratlin.rank(a)
        for x in combos:
            assert ident.check_combination(m, x)
            # per group: sum_z alpha_z 1(T_g(z) = t) is 0/1 and equals c_g
            for j, g in enumerate(m.groups):
                assert sum(a_z for a_z, v in zip(x.alpha, g) if v == t) == x.c[j]


def test_cube_cap():
    m = SelectionModel(Spec(3, 2), all_response_types(Spec(3, 2)))
    with pytest.raises(ValueError):
        ident.binary_combinations(m, 1, cap=16)


# -- collections

def test_late_collection():
    (coll,) = ident.binary_collections(LATE, 1, 0)
    assert coll.c == (0, 0, 1)
    assert coll.alpha_t_prime == (-1, 1) and coll.alpha_t == (1, -1)


def test_compliers_defiers_collections():
    assert cset(ident.binary_collections(COMPLIERS_DEFIERS, 1, 0)) == {(1, 0), (0, 1), (1, 1)}


def test_reference_model_14_single_collection(reference):
    m = reference["SM.2.3.14"][0]
    assert cset(ident.binary_collections(m, 1, 0)) == {(0, 1, 0, 1, 0, 0)}


def test_invalid_pair():
    with pytest.raises(ValueError):
        ident.binary_collections(LATE, 1, 1)
    with pytest.raises(ValueError):
        ident.binary_collections(LATE, 2, 0)


@given(models())
def test_collections_are_combination_intersection(m):
    k = m.spec.n_treatments
    for tp in range(k):
        for t in range(k):
            if tp == t:
                continue
            colls = ident.binary_collections(m, tp, t)
            expected = cset(ident.binary_combinations(m, tp)) & cset(ident.binary_combinations(m, t))
            assert cset(colls) == expected
            assert len(colls) <= ident.melo_winter_cap(m, tp, t)
            for c in colls:
                assert ident.check_collection(m, c)


@given(models())
def test_always_t_groups_force_zero_sum(m):
    k = m.spec.n_treatments
    for tp in range(k):
        for t in range(k):
            if tp == t:
                continue
            for c in ident.binary_collections(m, tp, t):
                if always_takes(m, t):
                    assert sum(c.alpha_t) == 0
                if always_takes(m, tp):
                    assert sum(c.alpha_t_prime) == 0


# -- coefficient witnesses

def test_alpha_from_c_late():
    assert ident.alpha_from_c(LATE, 1, (0, 0, 1)) == [-1, 1]
    assert ident.alpha_from_c(LATE, 1, (1, 1, 1)) is None


@pytest.mark.parametrize("z", [0, 1])
def test_row_of_indicator_matrix_witnessed_by_unit_vector(z):
    a = indicator_matrix(LATE, 1)
    alpha = [int(i == z) for i in range(2)]
    assert ratlin.vecmat(alpha, a) == a[z]
    assert ratlin.vecmat(ident.alpha_from_c(LATE, 1, a[z]), a) == a[z]


@pytest.mark.parametrize("s", range(4))
def test_staircase_unit_vector_picks_pinv_row(s):
    c = [int(j == s) for j in range(5)]
    assert ident.alpha_from_c(STAIRCASE_MODEL, 1, c) == [Fraction(x) for x in STAIRCASE_BPLUS[s]]


def test_staircase_last_unit_vector_not_identified():
    assert ident.alpha_from_c(STAIRCASE_MODEL, 1, [0, 0, 0, 0, 1]) is None


@given(models(), st.data())
def test_alpha_witnesses_agree(m, data):
    t = data.draw(st.integers(0, m.spec.n_treatments - 1))
    a = indicator_matrix(m, t)
    for x in ident.binary_combinations(m, t):
        w = ident.alpha_from_c(m, t, x.c)
        assert ratlin.vecmat(w, a) == list(x.c)
        assert ratlin.vecmat(ratlin.rowspace_solve(a, x.c), a) == list(x.c)


# -- complements

def test_complement_late():
    coll = ident.complement_alpha(LATE, (-1, 1))
    assert coll.alpha_t == (1, -1) and coll.c == (0, 0, 1)


def test_complement_needs_zero_sum():
    assert ident.complement_alpha(LATE, (1, 0)) is None


def test_complement_needs_binary_treatment():
    with pytest.raises(ValueError):
        ident.complement_alpha(model_from_rows([[0, 2], [1, 1]]), (1, -1))


@st.composite
def zero_sum_setups(draw):
    # alpha summing to zero, then a model built from types it maps to 0 or 1
    z = draw(st.integers(2, 3))
    head = draw(st.lists(st.sampled_from([-2, -1, Fraction(-1, 2), 0, Fraction(1, 2), 1, 2]),
                         min_size=z - 1, max_size=z - 1))
    alpha = head + [-sum(head, Fraction(0))]
    types = all_response_types(Spec(z, 2))
    ok = [g for g in types if sum(a for a, v in zip(alpha, g) if v == 1) in (0, 1)]
    groups = draw(st.lists(st.sampled_from(ok), min_size=1, max_size=len(ok), unique=True))
    return SelectionModel(Spec(z, 2), groups), alpha


@given(zero_sum_setups())
def test_complement_property(setup):
    m, alpha = setup
    c = ratlin.vecmat(alpha, indicator_matrix(m, 1))
    assume(any(c))
    coll = ident.complement_alpha(m, alpha)
    assert ratlin.vecmat(list(coll.alpha_t), indicator_matrix(m, 0)) == c
    assert ident.check_collection(m, coll)


# -- Melo-Winter bound

def test_melo_winter_late():
    assert ident.rowspace_intersection_dim(indicator_matrix(LATE, 1), indicator_matrix(LATE, 0)) == 1
    assert ident.melo_winter_cap(LATE, 1, 0) == 2
    assert len(ident.binary_collections(LATE, 1, 0)) == 1


def test_melo_winter_compliers_defiers():
    assert ident.melo_winter_cap(COMPLIERS_DEFIERS, 1, 0) == 4
    assert len(ident.binary_collections(COMPLIERS_DEFIERS, 1, 0)) == 3


def test_vertex_enumeration_empty_basis():
    assert ident.binary_vertices([], 3) == []
