"""Exact population oracle for checking identification results."""
import json
from dataclasses import dataclass
from fractions import Fraction

from . import ratlin
from .estimand import build_te_estimand
from .space import indicator_matrix

MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class LatentDistribution:
    group_probs: tuple
    group_means: tuple  # [t][g] = E[Y(t) | G = g]

    def __post_init__(self):
        if any(p < 0 for p in self.group_probs):
            raise ValueError("negative group probability")
        if sum(self.group_probs) != 1:
            raise ValueError("group probabilities must sum to one")


@dataclass(frozen=True)
class ObservableMoments:
    yd: tuple  # [t][z] = E[Y D^[t] | Z=z]
    d: tuple   # [t][z] = E[D^[t] | Z=z]


class PreconditionError(ValueError):
    pass


def latent(probs, means):
    return LatentDistribution(tuple(Fraction(p) for p in probs),
                              tuple(tuple(Fraction(m) for m in row) for row in means))


def observable_moments(model, lat):
    k, n = model.spec.n_treatments, len(model.groups)
    if len(lat.group_probs) != n or len(lat.group_means) != k:
        raise ValueError("latent distribution does not match the model")
    yd, d = [], []
    for t in range(k):
        a = indicator_matrix(model, t)
        yd.append(tuple(sum((lat.group_probs[g] * lat.group_means[t][g] for g in range(n) if row[g]), Fraction(0))
                        for row in a))
        d.append(tuple(sum((lat.group_probs[g] for g in range(n) if row[g]), Fraction(0)) for row in a))
    return ObservableMoments(tuple(yd), tuple(d))


def complier_mass(lat, c):
    return sum((p for p, x in zip(lat.group_probs, c) if x), Fraction(0))


def target_parameter(lat, c, t):
    """mu_c^t = E[Y(t) | c(G) = 1]."""
    mass = complier_mass(lat, c)
    if mass == 0:
        raise PreconditionError("complier group has zero probability")
    num = sum((p * m for p, m, x in zip(lat.group_probs, lat.group_means[t], c) if x), Fraction(0))
    return num / mass


def check_identification(model, coll, lat):
    """Compare the collection's estimand with the true effect on ``lat``."""
    mass = complier_mass(lat, coll.c)
    if mass == 0:
        raise PreconditionError("complier group has zero probability")
    moments = observable_moments(model, lat)
    f = build_te_estimand(coll, model.spec.n_treatments)
    value, den = f.evaluate(moments)
    target = target_parameter(lat, coll.c, coll.t_prime) - target_parameter(lat, coll.c, coll.t)
    den2 = f.second.evaluate(moments)[1]
    return {"ok": value == target and den == mass and den2 == mass,
            "estimand": value, "target": target, "denominator": den, "complier_mass": mass}


def non_identification_witness(model, t, c, base=None):
    """Two latent distributions with equal observables but different mu_c^t.

    Returns None when c is in the row space of A^[t].  The mean of Y(t) in
    group g moves by v_g / P(g) for a v with A^[t] v = 0 and c'v != 0, which
    leaves every E[Y D^[t] | Z=z] unchanged.
    """
    if not any(c):
        raise ValueError("c must be nonzero")
    a = indicator_matrix(model, t)
    if ratlin.in_rowspace(a, c):
        return None
    n, k = len(model.groups), model.spec.n_treatments
    if base is None:
        base = latent([Fraction(1, n)] * n, [[0] * n for _ in range(k)])
    if any(p == 0 for p in base.group_probs):
        raise ValueError("base group probabilities must be positive")
    v = next(v for v in ratlin.right_nullspace(a) if sum(x * y for x, y in zip(v, c)) != 0)
    shifted = [m + x / p for m, x, p in zip(base.group_means[t], v, base.group_probs)]
    means2 = [row if s != t else tuple(shifted) for s, row in enumerate(base.group_means)]
    return base, LatentDistribution(base.group_probs, tuple(tuple(r) for r in means2))


def nsog_means(sigma, y_moments):
    """E[Y(t)] for every t from Sigma[z][t] = P(Z=z, T=t) and E[Y 1(Z=z)]."""
    s = ratlin.as_matrix(sigma)
    if len(s) != len(s[0]):
        raise ValueError("sigma must be square")
    if len(y_moments) != len(s):
        raise ValueError("y_moments length does not match sigma")
    inv = ratlin.inverse(s)
    return [sum((row[z] * Fraction(y_moments[z]) for z in range(len(s))), Fraction(0)) for row in inv]


def nsog_system(model, lat, instrument_probs, values=None):
    """(Sigma, E[Y 1(Z=z)]) over the chosen instrument values."""
    moments = observable_moments(model, lat)
    k = model.spec.n_treatments
    values = list(range(k)) if values is None else list(values)
    sigma = [[Fraction(instrument_probs[z]) * moments.d[t][z] for t in range(k)] for z in values]
    y = [Fraction(instrument_probs[z]) * sum(moments.yd[t][z] for t in range(k)) for z in values]
    return sigma, y


# ---------------------------------------------------------------- random draws

class SplitMix64:
    """Counter-based 64-bit generator; easy to reproduce in any language.

    Seed 0 yields 0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F.
    """

    def __init__(self, seed):
        self.state = seed & MASK64

    def next(self):
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)


def random_latent(model, seed):
    """Positive rational group probabilities and integer means in [-10, 10]."""
    rng = SplitMix64(seed)
    n, k = len(model.groups), model.spec.n_treatments
    weights = [1 + rng.next() % 16 for _ in range(n)]
    total = sum(weights)
    means = [[rng.next() % 21 - 10 for _ in range(n)] for _ in range(k)]
    return latent([Fraction(w, total) for w in weights], means)


def verify_catalog(catalog, seeds=range(100)):
    """One report record per (entry, collection, seed), in that order."""
    out = []
    for e in catalog.entries:
        for i, coll in enumerate(e.collections):
            for s in seeds:
                r = check_identification(e.model, coll, random_latent(e.model, s))
                out.append({"sm_id": e.sm_id, "collection": i, "seed": s,
                            "status": "pass" if r["ok"] else "fail",
                            "estimand": str(r["estimand"]), "target": str(r["target"]),
                            "denominator": str(r["denominator"]),
                            "complier_mass": str(r["complier_mass"])})
    return out


def report_lines(records):
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in records)
