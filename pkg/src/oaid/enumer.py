"""Brute-force search for binary collections over all selection models.

Two searches are provided.  ``algorithm1`` loops over every selection model
and intersects the stacked nullspace with the unit cube.  The faster
``algorithm2_part1`` loops over coefficient vectors instead, keeping for each
vector the largest set of response types on which it is a binary collection,
and ``algorithm2_part2`` extends those records to every treatment pair and
removes relabeling duplicates.
"""
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import ident, ratlin
from .space import (SelectionModel, Spec, all_response_types, canonical_key, group_actions,
                    pair_relabeling, permute_instruments, relabel_treatments, type_index)

DEFAULT_ALPHA_CAP = 10 ** 10
DEFAULT_SUBSET_CAP = 1 << 12
BATCH = 1 << 15
DEDUP_MODES = ("sequential", "instruments", "treatments", "joint", "none")


@dataclass(frozen=True)
class MaximalRecord:
    """One surviving coefficient vector of the (1, 0) search.

    ``alpha`` holds (alpha_1, -alpha_0); index sets refer to all_response_types.
    """
    alpha: tuple
    g_zero: frozenset
    g_max: frozenset
    compliers: frozenset

    @property
    def alpha_t_prime(self):
        return self.alpha[:len(self.alpha) // 2]

    @property
    def alpha_t(self):
        return tuple(-x for x in self.alpha[len(self.alpha) // 2:])

    @property
    def c_on_max(self):
        return tuple(int(g in self.compliers) for g in sorted(self.g_max))


@dataclass
class CatalogEntry:
    sm_id: str
    model: SelectionModel
    collections: list = field(default_factory=list)


@dataclass
class Catalog:
    spec: Spec
    entries: list = field(default_factory=list)


def summary_counts(catalog):
    return len(catalog.entries), sum(len(e.collections) for e in catalog.entries)


# ---------------------------------------------------------------- part one

class _Grid:
    """Integer-scaled coefficient grid and the stacked indicator matrices."""

    def __init__(self, spec):
        self.spec = spec
        nz = spec.n_instruments
        self.types = all_response_types(spec)
        self.values = ratlin.coefficient_set(nz)
        self.scale = math.lcm(*(v.denominator for v in self.values))
        self.ints = np.array([int(v * self.scale) for v in self.values], dtype=np.int64)
        self.base = len(self.values)
        self.dim = 2 * nz
        self.total = self.base ** self.dim
        a1 = np.array([[int(g[z] == 1) for g in self.types] for z in range(nz)], dtype=np.int64)
        a0 = np.array([[int(g[z] == 0) for g in self.types] for z in range(nz)], dtype=np.int64)
        self.a1 = a1
        self.stacked = np.vstack([a1, a0])

    def alphas(self, lo, hi):
        idx = np.arange(lo, hi, dtype=np.int64)
        digits = np.empty((hi - lo, self.dim), dtype=np.int64)
        for p in range(self.dim - 1, -1, -1):
            digits[:, p] = idx % self.base
            idx //= self.base
        return self.ints[digits]

    def to_fraction(self, row):
        return tuple(Fraction(int(x), self.scale) for x in row)

    def masks(self, alpha_int):
        """(zero, max, compliers, v1) arrays for a batch of scaled vectors."""
        nz = self.spec.n_instruments
        v1 = alpha_int[:, :nz] @ self.a1
        zero = (alpha_int @ self.stacked) == 0
        gmax = zero & ((v1 == 0) | (v1 == self.scale))
        comp = gmax & (v1 == self.scale)
        return zero, gmax, comp, v1


def _bits(row):
    return int.from_bytes(np.packbits(row, bitorder="little").tobytes(), "little")


def _unbits(x):
    out, i = [], 0
    while x:
        if x & 1:
            out.append(i)
        x >>= 1
        i += 1
    return frozenset(out)


def _score(row):
    ints = tuple(int(x) for x in row)
    return (sum(1 for x in ints if x), sum(x * x for x in ints), ints)


def _scan(args):
    """Map step: best candidate per (comparison key, maximal set) in [lo, hi)."""
    spec, lo, hi, compare = args
    grid = _Grid(spec)
    best = {}
    for start in range(lo, hi, BATCH):
        alpha = grid.alphas(start, min(start + BATCH, hi))
        zero, gmax, comp, v1 = grid.masks(alpha)
        for i in np.nonzero(comp.any(axis=1))[0]:
            cb = _bits(comp[i])
            key = (cb if compare == "set" else tuple(int(x) for x in v1[i]), _bits(gmax[i]))
            sc = _score(alpha[i])
            old = best.get(key)
            if old is None or sc < old[0]:
                best[key] = (sc, _bits(zero[i]), cb)
    return best


def _merge(into, part):
    for key, val in part.items():
        old = into.get(key)
        if old is None or val[0] < old[0]:
            into[key] = val


def _reduce(best, grid):
    """Drop candidates whose maximal set sits strictly inside another with the same key."""
    by_key = {}
    for (ck, gm), val in best.items():
        by_key.setdefault(ck, []).append((gm, val))
    records = []
    for ck, items in by_key.items():
        sets = [gm for gm, _ in items]
        for gm, (sc, zb, cb) in items:
            if any(other != gm and other & gm == gm for other in sets):
                continue
            records.append(MaximalRecord(grid.to_fraction(sc[2]), _unbits(zb), _unbits(gm), _unbits(cb)))
    records.sort(key=lambda r: r.alpha)
    return records


def _chunks(total, lo, pieces):
    step = max(1, -(-(total - lo) // pieces))
    return [(a, min(a + step, total)) for a in range(lo, total, step)]


def _save_checkpoint(path, spec, done, best, grid):
    recs = [{"alpha": [str(x) for x in grid.to_fraction(sc[2])]} for sc, _, _ in best.values()]
    recs.sort(key=lambda r: [Fraction(x) for x in r["alpha"]])
    doc = {"spec": {"treatments": spec.n_treatments, "instruments": spec.n_instruments},
           "range_done": [0, done], "records": recs}
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(doc, fh)
    os.replace(tmp, path)


def _load_checkpoint(path, spec, grid, compare):
    with open(path) as fh:
        doc = json.load(fh)
    if doc["spec"] != {"treatments": spec.n_treatments, "instruments": spec.n_instruments}:
        raise ValueError("checkpoint was written for a different spec")
    lo, hi = doc["range_done"]
    if lo != 0:
        raise ValueError("checkpoint range must start at 0")
    best = {}
    if doc["records"]:
        rows = np.array([[int(Fraction(x) * grid.scale) for x in r["alpha"]] for r in doc["records"]],
                        dtype=np.int64)
        zero, gmax, comp, v1 = grid.masks(rows)
        for i in range(len(rows)):
            cb = _bits(comp[i])
            key = (cb if compare == "set" else tuple(int(x) for x in v1[i]), _bits(gmax[i]))
            best[key] = (_score(rows[i]), _bits(zero[i]), cb)
    return hi, best


def algorithm2_part1(spec, cap=DEFAULT_ALPHA_CAP, threads=1, compare="set",
                     checkpoint=None, resume=None, checkpoint_every=None):
    """Loop over every coefficient vector for the pair (1, 0) and keep maximal records.

    ``compare`` picks what two candidates must share for one to dominate the
    other: "set" compares complier sets, "vector" the full vector alpha_1'A^[1]
    over every response type.
    """
    if compare not in ("set", "vector"):
        raise ValueError("compare must be 'set' or 'vector'")
    grid = _Grid(spec)
    if grid.total > cap:
        raise ValueError("%d coefficient vectors exceed the cap of %d" % (grid.total, cap))
    start, best = 0, {}
    if resume:
        start, best = _load_checkpoint(resume, spec, grid, compare)
    threads = max(1, int(threads))
    if checkpoint_every:
        pieces = max(1, -(-(grid.total - start) // checkpoint_every))
    else:
        pieces = threads * 4 if threads > 1 else 1
    chunks = _chunks(grid.total, start, pieces)
    jobs = [(spec, lo, hi, compare) for lo, hi in chunks]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(threads) as pool:
            for (lo, hi), part in zip(chunks, pool.map(_scan, jobs)):
                _merge(best, part)
                if checkpoint:
                    _save_checkpoint(checkpoint, spec, hi, best, grid)
    else:
        for (lo, hi), job in zip(chunks, jobs):
            _merge(best, _scan(job))
            if checkpoint:
                _save_checkpoint(checkpoint, spec, hi, best, grid)
    return _reduce(best, grid)


# ---------------------------------------------------------------- algorithm 1

def _dot_col(v, m, g):
    return sum((x * row[g] for x, row in zip(v, m)), Fraction(0))


def _forced(a1, a0, n1, n0, f1, f0, g):
    # Type g joins every witness of the collection when its two values are
    # the same 0/1 constant over the whole affine family of coefficients.
    if any(_dot_col(v, f1, g) for v in n1) or any(_dot_col(v, f0, g) for v in n0):
        return False
    v1, v0 = _dot_col(a1, f1, g), _dot_col(a0, f0, g)
    return v1 == v0 and v1 in (0, 1)


def algorithm1_records(spec, cap=DEFAULT_SUBSET_CAP):
    """Maximal (model, complier set) pairs for (1, 0), found model by model.

    A pair (M, c) counts as maximal when some witness coefficient vector
    admits no response type outside M.  Over the rationals that holds unless
    an outside type is admitted by every witness, which is a linear test.
    Pairs whose model is strictly inside another with the same complier
    set are then dropped, as in the coefficient scan.
    """
    types = all_response_types(spec)
    n = len(types)
    if (1 << n) > cap:
        raise ValueError("2^%d selection models exceed the cap of %d" % (n, cap))
    full = SelectionModel(spec, types)
    f1 = ident.indicator_matrix(full, 1)
    f0 = ident.indicator_matrix(full, 0)
    found = {}
    for mask in range(1, 1 << n):
        idx = [i for i in range(n) if mask >> i & 1]
        out = [i for i in range(n) if not mask >> i & 1]
        m1 = [[row[i] for i in idx] for row in f1]
        m0 = [[row[i] for i in idx] for row in f0]
        n1 = ratlin.nullspace_basis(m1)
        n0 = ratlin.nullspace_basis(m0)
        basis = ident.collection_c_basis(SelectionModel(spec, [types[i] for i in idx]), 1, 0)
        for c in ident.binary_vertices(basis, len(idx)):
            a1 = ratlin.rowspace_solve(m1, c)
            a0 = ratlin.rowspace_solve(m0, c)
            if any(_forced(a1, a0, n1, n0, f1, f0, g) for g in out):
                continue
            comp = frozenset(idx[j] for j in range(len(idx)) if c[j])
            found.setdefault(comp, []).append((frozenset(idx), a1, a0))
    records = []
    for comp, items in found.items():
        sets = [g for g, _, _ in items]
        for g, a1, a0 in items:
            if any(g < other for other in sets):
                continue
            records.append(MaximalRecord(tuple(a1) + tuple(-x for x in a0), g, g, comp))
    records.sort(key=lambda r: (sorted(r.g_max), sorted(r.compliers)))
    return records


def algorithm1(spec, mode="sequential", cap=DEFAULT_SUBSET_CAP):
    return algorithm2_part2(algorithm1_records(spec, cap), spec, mode)


# ---------------------------------------------------------------- part two

def _extend(records, spec):
    """Relabel every record onto every ordered pair t' > t.

    Yields (pair, columns, alpha_t', alpha_t) with the columns in the record's
    own display order carried through the relabeling.
    """
    types = all_response_types(spec)
    k = spec.n_treatments
    for tp in range(k):
        for t in range(tp):
            sigma = pair_relabeling(k, tp, t)
            for rec in records:
                cols = sorted((types[i] for i in rec.g_max), key=lambda g: type_index(g, k))
                yield (tp, t), relabel_treatments(cols, sigma), rec.alpha_t_prime, rec.alpha_t


def _instrument_step(items, spec):
    # Within each pair, drop a record whose column sequence is a row
    # permutation of one already kept (columns compared in order).
    zps = [zp for zp, _ in group_actions(spec, "instruments")]
    seen = {}
    for item in items:
        pair, cols = item[0], item[1]
        kept = seen.setdefault(pair, set())
        images = {permute_instruments(cols, zp) for zp in zps}
        if any(img in kept for img in images if img != cols):
            continue
        kept.add(cols)
        yield item


def _merge_models(items):
    merged = {}
    for pair, cols, a1, a0 in items:
        key = frozenset(cols)
        if key not in merged:
            merged[key] = (cols, [])
        merged[key][1].append((pair, a1, a0))
    return merged


def _treatment_step(merged, spec):
    # A model is dropped when a treatment relabeling either carries its whole
    # collection list onto a kept model's list with every pair still ordered,
    # or turns its column sequence into a kept model's column sequence.
    perms = [tp for _, tp in group_actions(spec, "treatments")][1:]
    out = {}
    for key, (cols, colls) in merged.items():
        dup = False
        for sg in perms:
            image = frozenset(relabel_treatments(key, sg))
            if image in out:
                mapped = set()
                for (tp, t), a1, a0 in colls:
                    if sg[tp] < sg[t]:
                        break
                    mapped.add(((sg[tp], sg[t]), a1, a0))
                else:
                    if mapped == set(out[image][1]):
                        dup = True
                        break
        if not dup:
            images = {relabel_treatments(cols, sg) for sg in perms}
            dup = any(kc in images and kc != cols for kc, _ in out.values())
        if not dup:
            out[key] = (cols, colls)
    return out


def _joint_step(merged, spec):
    out, seen = {}, set()
    for key, (cols, colls) in merged.items():
        ck = canonical_key(SelectionModel(spec, cols), "joint")
        if ck in seen:
            continue
        seen.add(ck)
        out[key] = (cols, colls)
    return out


def algorithm2_part2(records, spec, mode="sequential"):
    """Extend (1, 0) records to all pairs, group by model and remove duplicates.

    mode "sequential" removes instrument relabelings first and treatment
    relabelings second; "instruments" and "treatments" apply one stage only,
    "joint" keeps one model per orbit of the full relabeling group and "none"
    only groups.
    """
    if mode not in DEDUP_MODES:
        raise ValueError("unknown dedup mode %r" % (mode,))
    items = list(_extend(records, spec))
    if mode in ("sequential", "instruments"):
        items = list(_instrument_step(items, spec))
    merged = _merge_models(items)
    if mode in ("sequential", "treatments"):
        merged = _treatment_step(merged, spec)
    elif mode == "joint":
        merged = _joint_step(merged, spec)
    catalog = Catalog(spec)
    for s, (cols, colls) in enumerate(merged.values(), 1):
        model = SelectionModel(spec, cols)
        entry = CatalogEntry("SM.%d.%d.%d" % (spec.n_treatments, spec.n_instruments, s), model)
        for (tp, t), a1, a0 in colls:
            c = ratlin.vecmat(list(a1), ident.indicator_matrix(model, tp))
            coll = ident.BinaryCollection(tp, t, tuple(a1), tuple(a0), tuple(int(x) for x in c))
            if not ident.check_collection(model, coll):
                raise AssertionError("invalid collection produced for %s" % entry.sm_id)
            entry.collections.append(coll)
        catalog.entries.append(entry)
    return catalog


def enumerate_catalog(spec, mode="sequential", threads=1, compare="set", **kw):
    return algorithm2_part2(algorithm2_part1(spec, threads=threads, compare=compare, **kw), spec, mode)


# ---------------------------------------------------------------- comparison

def collection_class(spec, groups, compliers, pair):
    """Canonical form of (model, complier set, pair) under all relabelings.

    A collection for (t', t) is also one for (t, t'), so the pair is stored
    unordered.
    """
    best = None
    for zp, sg in group_actions(spec, "joint"):
        g2 = sorted(relabel_treatments(permute_instruments(groups, zp), sg))
        c2 = sorted(relabel_treatments(permute_instruments(compliers, zp), sg))
        p2 = tuple(sorted((sg[pair[0]], sg[pair[1]]), reverse=True))
        key = (tuple(g2), tuple(c2), p2)
        if best is None or key < best:
            best = key
    return best


def catalog_classes(catalog):
    out = set()
    for e in catalog.entries:
        for coll in e.collections:
            comp = [g for g, x in zip(e.model.groups, coll.c) if x]
            out.add(collection_class(catalog.spec, e.model.groups, comp, (coll.t_prime, coll.t)))
    return out


def record_pairs(records):
    return {(r.g_max, r.compliers) for r in records}


def match_reference(catalog, reference):
    """Pair each reference entry (sm_id, SelectionModel, n_collections) with a produced entry.

    Matching is one to one where possible: identical column sets first,
    then the same class under instrument relabeling, then under the joint
    group.  Returns (rows, extra) where extra lists produced ids nobody
    claimed; a row's relation is "unmatched" when no class fits.
    """
    levels = [("identical", lambda m: frozenset(m.groups)),
              ("instruments", lambda m: canonical_key(m, "instruments")),
              ("joint", lambda m: canonical_key(m, "joint"))]
    used, result = set(), {}
    for name, key in levels:
        index = {}
        for e in catalog.entries:
            index.setdefault(key(e.model), []).append(e)
        for ref_id, model, _ in reference:
            if ref_id in result:
                continue
            free = [e for e in index.get(key(model), []) if e.sm_id not in used]
            if free:
                used.add(free[0].sm_id)
                result[ref_id] = (name, free[0])
    rows = []
    for ref_id, model, n in reference:
        name, e = result.get(ref_id, ("unmatched", None))
        rows.append({"reference": ref_id, "produced": e.sm_id if e else None, "relation": name,
                     "reference_collections": n,
                     "produced_collections": len(e.collections) if e else 0})
    extra = [e.sm_id for e in catalog.entries if e.sm_id not in used]
    return rows, extra
