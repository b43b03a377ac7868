from fractions import Fraction

import pytest

from oaid import enumer, ident, ratlin
from oaid.space import Spec, all_response_types, canonical_key

from conftest import IDENTICAL_23


def records(k, z):
    return enumer.algorithm2_part1(Spec(z, k))


# -- part one

def test_candidate_space_sizes():
    assert enumer._Grid(Spec(2, 2)).total == 81
    assert enumer._Grid(Spec(3, 2)).total == 7 ** 6


def test_late_complier_record_present():
    # alpha_1 = (-1, 1), alpha_0 = (1, -1), stored as (alpha_1, -alpha_0)
    recs = records(2, 2)
    alphas = {r.alpha for r in recs}
    assert (-1, 1, -1, 1) in alphas
    rec = next(r for r in recs if r.alpha == (-1, 1, -1, 1))
    assert rec.alpha_t_prime == (-1, 1) and rec.alpha_t == (1, -1)


def test_every_record_has_compliers():
    for k, z in [(2, 2), (3, 2), (2, 3)]:
        for r in records(k, z):
            assert r.compliers and r.compliers <= r.g_max <= r.g_zero
            assert any(r.alpha)


def test_coefficients_come_from_the_grid():
    c3 = set(ratlin.coefficient_set(3))
    for r in records(2, 3):
        assert set(r.alpha) <= c3


@pytest.mark.parametrize("k,z", [(2, 2), (3, 2), (2, 3)])
def test_records_are_maximal(k, z):
    # no response type outside g_max keeps alpha a binary collection
    spec = Spec(z, k)
    types = all_response_types(spec)
    for r in records(k, z):
        a1, a0 = r.alpha_t_prime, r.alpha_t
        for i, g in enumerate(types):
            v1 = sum((a for a, v in zip(a1, g) if v == 1), Fraction(0))
            v0 = sum((a for a, v in zip(a0, g) if v == 0), Fraction(0))
            inside = v1 == v0 and v1 in (0, 1)
            assert inside == (i in r.g_max)
            assert (i in r.compliers) == (inside and v1 == 1)


def test_partition_independence():
    spec = Spec(3, 2)
    grid = enumer._Grid(spec)
    whole = enumer._scan((spec, 0, grid.total, "set"))
    parts = {}
    for lo, hi in enumer._chunks(grid.total, 0, 7):
        enumer._merge(parts, enumer._scan((spec, lo, hi, "set")))
    assert enumer._reduce(whole, grid) == enumer._reduce(parts, grid)


def test_threads_give_same_records():
    spec = Spec(3, 2)
    assert enumer.algorithm2_part1(spec, threads=2) == enumer.algorithm2_part1(spec)


def test_alpha_cap():
    with pytest.raises(ValueError):
        enumer.algorithm2_part1(Spec(3, 2), cap=1000)


def test_vector_comparison_runs():
    cat = enumer.algorithm2_part2(enumer.algorithm2_part1(Spec(2, 2), compare="vector"), Spec(2, 2))
    assert enumer.summary_counts(cat)[1] >= 4


def test_resume_from_partial_checkpoint(tmp_path):
    spec = Spec(3, 2)
    grid = enumer._Grid(spec)
    half = grid.total // 2
    best = enumer._scan((spec, 0, half, "set"))
    path = str(tmp_path / "ck.json")
    enumer._save_checkpoint(path, spec, half, best, grid)
    assert enumer.algorithm2_part1(spec, resume=path) == enumer.algorithm2_part1(spec)


def test_checkpoint_for_other_spec_rejected(tmp_path):
    path = str(tmp_path / "ck.json")
    enumer.algorithm2_part1(Spec(2, 2), checkpoint=path)
    with pytest.raises(ValueError):
        enumer.algorithm2_part1(Spec(3, 2), resume=path)


# -- part two and catalogs

def test_counts_small():
    two_by_two = Spec(n_instruments=2, n_treatments=2)
    three_treatments = Spec(n_instruments=2, n_treatments=3)
    assert enumer.summary_counts(enumer.enumerate_catalog(two_by_two)) == (2, 4)
    assert enumer.summary_counts(enumer.enumerate_catalog(three_treatments)) == (7, 9)


def test_counts_2_3_frozen():
    # the reference catalog lists 20 / 44; the difference is analysed in the acceptance suite
    spec = Spec(n_instruments=3, n_treatments=2)
    assert enumer.summary_counts(enumer.enumerate_catalog(spec)) == (24, 48)


def test_empty_catalog_counts():
    assert enumer.summary_counts(enumer.Catalog(Spec(2, 2))) == (0, 0)


def test_unknown_mode():
    with pytest.raises(ValueError):
        enumer.algorithm2_part2([], Spec(2, 2), "bogus")


@pytest.mark.parametrize("mode", enumer.DEDUP_MODES)
def test_every_collection_valid_in_every_mode(mode):
    for z, k in [(2, 2), (2, 3), (3, 2)]:
        spec = Spec(z, k)
        cat = enumer.algorithm2_part2(records(k, z), spec, mode)
        for e in cat.entries:
            assert e.collections
            for c in e.collections:
                assert ident.check_collection(e.model, c)
                assert c.t_prime > c.t


def test_joint_mode_one_model_per_orbit():
    cat = enumer.algorithm2_part2(records(2, 3), Spec(3, 2), "joint")
    keys = [canonical_key(e.model, "joint") for e in cat.entries]
    assert len(keys) == len(set(keys))


def test_collections_are_complete_for_each_model(small_catalogs):
    # every binary collection of a cataloged model that the search can see is listed
    for cat in small_catalogs.values():
        for e in cat.entries:
            listed = {(c.t_prime, c.t, c.c) for c in e.collections}
            for tp, t, c in listed:
                assert c in {x.c for x in ident.binary_collections(e.model, tp, t)}


def test_three_two_reproduces_reference(reference, small_catalogs):
    cat = small_catalogs[(3, 2)]
    by_cols = {e.model.groups: e for e in cat.entries}
    refs = {k: v for k, v in reference.items() if k.startswith("SM.3.2.")}
    assert len(refs) == len(cat.entries) == 7
    for sid, (model, colls) in refs.items():
        assert by_cols[model.groups].collections == colls, sid


def test_two_two_reproduces_reference(reference, small_catalogs):
    cat = small_catalogs[(2, 2)]
    for e in cat.entries:
        model, colls = reference[e.sm_id]
        assert e.model.groups == model.groups and e.collections == colls


def test_two_three_shared_entries(reference, small_catalogs):
    cat = {e.sm_id: e for e in small_catalogs[(2, 3)].entries}
    for ref_id, got_id in IDENTICAL_23.items():
        model, colls = reference[ref_id]
        e = cat[got_id]
        assert e.model.group_set() == model.group_set()
        assert set(e.collections) == set(colls)


def test_reference_coefficients_are_valid(reference):
    # independent check of the reference data itself
    for sid, (model, colls) in reference.items():
        for c in colls:
            assert ident.check_collection(model, c), sid


def test_match_reference_two_three(reference, small_catalogs):
    refs = [(sid, m, len(c)) for sid, (m, c) in reference.items() if sid.startswith("SM.2.3.")]
    rows, extra = enumer.match_reference(small_catalogs[(2, 3)], refs)
    assert all(r["relation"] != "unmatched" for r in rows)
    assert len({r["produced"] for r in rows}) == 20
    assert all(r["reference_collections"] == r["produced_collections"] for r in rows)
    assert sorted(extra) == ["SM.2.3.3", "SM.2.3.4", "SM.2.3.6", "SM.2.3.8"]
    assert {r["reference"]: r["produced"] for r in rows if r["relation"] == "identical"} == IDENTICAL_23


# -- algorithm 1

@pytest.mark.parametrize("k,z", [(2, 2), (3, 2), (2, 3)])
def test_algorithms_agree(k, z):
    spec = Spec(z, k)
    r1, r2 = enumer.algorithm1_records(spec), enumer.algorithm2_part1(spec)
    assert enumer.record_pairs(r1) == enumer.record_pairs(r2)
    c1 = enumer.algorithm2_part2(r1, spec)
    c2 = enumer.algorithm2_part2(r2, spec)
    assert enumer.catalog_classes(c1) == enumer.catalog_classes(c2)


def test_algorithm1_counts():
    assert enumer.summary_counts(enumer.algorithm1(Spec(n_instruments=2, n_treatments=3))) == (7, 9)


def test_algorithm1_cap():
    with pytest.raises(ValueError):
        enumer.algorithm1_records(Spec(3, 3))


def test_collection_class_pair_unordered():
    spec = Spec(2, 2)
    g = ((0, 0), (1, 1), (0, 1))
    assert enumer.collection_class(spec, g, [(0, 1)], (1, 0)) == \
        enumer.collection_class(spec, g, [(0, 1)], (0, 1))
