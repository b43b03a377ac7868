"""Response types, selection models and their relabelings."""
import itertools
import json
from dataclasses import dataclass

MODES = ("instruments", "treatments", "sequential", "joint")
DEFAULT_TYPE_CAP = 10 ** 6


@dataclass(frozen=True)
class Spec:
    n_instruments: int
    n_treatments: int

    def __post_init__(self):
        if self.n_instruments < 1:
            raise ValueError("need at least one instrument value")
        if self.n_treatments < 2:
            raise ValueError("need at least two treatment values")


def all_response_types(spec, cap=DEFAULT_TYPE_CAP):
    """Every map Z -> T as a tuple (T(0), ..., T(|Z|-1)), in lexicographic order."""
    n = spec.n_treatments ** spec.n_instruments
    if n > cap:
        raise ValueError("%d response types exceed the cap of %d" % (n, cap))
    return list(itertools.product(range(spec.n_treatments), repeat=spec.n_instruments))


def type_index(g, n_treatments):
    """Position of g when instrument 0 varies fastest; used for column order."""
    return sum(v * n_treatments ** z for z, v in enumerate(g))


class SelectionModel:
    """An ordered list of distinct response types (the columns of A)."""

    def __init__(self, spec, groups):
        groups = tuple(tuple(int(v) for v in g) for g in groups)
        if not groups:
            raise ValueError("a selection model needs at least one group")
        if len(set(groups)) != len(groups):
            raise ValueError("duplicate response types")
        for g in groups:
            if len(g) != spec.n_instruments:
                raise ValueError("response type %r has the wrong length" % (g,))
            if any(not 0 <= v < spec.n_treatments for v in g):
                raise ValueError("treatment label out of range in %r" % (g,))
        self.spec = spec
        self.groups = groups

    @property
    def rows(self):
        """A as a list of rows: rows[z][g] = T_g(z)."""
        return [[g[z] for g in self.groups] for z in range(self.spec.n_instruments)]

    def group_set(self):
        return frozenset(self.groups)

    def __len__(self):
        return len(self.groups)

    def __eq__(self, other):
        return isinstance(other, SelectionModel) and self.spec == other.spec and self.groups == other.groups

    def __hash__(self):
        return hash((self.spec, self.groups))

    def __repr__(self):
        return "SelectionModel(%r)" % (self.rows,)


def model_from_rows(rows, n_treatments=None):
    rows = [list(r) for r in rows]
    if not rows or not rows[0]:
        raise ValueError("empty model")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError("ragged rows")
    if n_treatments is None:
        n_treatments = max(2, max(max(r) for r in rows) + 1)
    spec = Spec(len(rows), n_treatments)
    return SelectionModel(spec, [tuple(r[j] for r in rows) for j in range(width)])


def indicator_matrix(model, t):
    """A^[t] as 0/1 integer rows: entry (z, g) is 1 iff group g takes t at z."""
    if not 0 <= t < model.spec.n_treatments:
        raise ValueError("invalid treatment label %r" % (t,))
    return [[int(g[z] == t) for g in model.groups] for z in range(model.spec.n_instruments)]


def always_takes(model, t):
    """Column indices of groups that take t at every instrument value."""
    return [j for j, g in enumerate(model.groups) if all(v == t for v in g)]


def permute_instruments(groups, zp):
    """Relabel instrument values: the new value at z is the old one at zp[z]."""
    return tuple(tuple(g[zp[z]] for z in range(len(zp))) for g in groups)


def relabel_treatments(groups, sigma):
    return tuple(tuple(sigma[v] for v in g) for g in groups)


def pair_relabeling(n_treatments, t_prime, t):
    """Treatment map sending 1 to t', 0 to t and 2, 3, ... in order onto the rest."""
    rest = [x for x in range(n_treatments) if x not in (t_prime, t)]
    sigma = {1: t_prime, 0: t}
    for old, new in zip(range(2, n_treatments), rest):
        sigma[old] = new
    return tuple(sigma[v] for v in range(n_treatments))


def group_actions(spec, mode):
    """(instrument permutation, treatment permutation) pairs generating the mode's orbit."""
    zps = list(itertools.permutations(range(spec.n_instruments)))
    tps = list(itertools.permutations(range(spec.n_treatments)))
    zid, tid = zps[0], tps[0]
    if mode in ("instruments", "sequential"):
        return [(zp, tid) for zp in zps]
    if mode == "treatments":
        return [(zid, tp) for tp in tps]
    if mode == "joint":
        return [(zp, tp) for zp in zps for tp in tps]
    raise ValueError("unknown symmetry mode %r" % (mode,))


def _serialize(spec, groups):
    cols = sorted(groups)
    return bytes([spec.n_treatments, spec.n_instruments] + [v for g in cols for v in g])


def canonical_key(model, mode="sequential"):
    """Smallest serialized sorted column set over the mode's orbit.

    Under "sequential" the key of a bare model only sees instrument
    permutations: the treatment stage of sequential dedup compares models
    together with their collections (see enumer), so two models related only
    by a treatment relabeling keep distinct keys here.
    """
    return min(_serialize(model.spec, relabel_treatments(permute_instruments(model.groups, zp), tp))
               for zp, tp in group_actions(model.spec, mode))


def canonical_model(model, mode="sequential"):
    """The orbit member whose sorted columns give the canonical key."""
    key = canonical_key(model, mode)
    n = model.spec.n_instruments
    cols = [tuple(key[2 + i:2 + i + n]) for i in range(0, len(key) - 2, n)]
    return SelectionModel(model.spec, cols)


def model_to_json(model):
    return {"instruments": model.spec.n_instruments,
            "treatments": model.spec.n_treatments,
            "rows": model.rows}


def model_from_json(obj):
    rows = obj["rows"]
    model = model_from_rows(rows, obj.get("treatments"))
    if "instruments" in obj and obj["instruments"] != len(rows):
        raise ValueError("instrument count does not match the number of rows")
    return model


def load_model(path):
    with open(path) as fh:
        return model_from_json(json.load(fh))


LATE = model_from_rows([[0, 1, 0], [0, 1, 1]], 2)
COMPLIERS_DEFIERS = model_from_rows([[1, 0], [0, 1]], 2)
