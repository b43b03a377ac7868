"""Estimand formulas for binary combinations and collections, and catalog output."""
import json
from dataclasses import dataclass
from fractions import Fraction

from .enumer import Catalog, CatalogEntry
from .ident import BinaryCollection
from .space import SelectionModel, Spec

DECIMAL_DENOMINATORS = (1, 2, 4, 5, 10)


@dataclass(frozen=True)
class EstimandFormula:
    """sum_k coef_k E[Y D^[t_k] | Z=z_k] / sum_k coef_k E[D^[t_k] | Z=z_k].

    ``terms`` holds (coef, t, z) and serves numerator and denominator alike.
    A difference formula subtracts ``second`` from the ratio.
    """
    terms: tuple
    kind: str = "mean"
    second: "EstimandFormula" = None
    binary: bool = True

    @property
    def numerator_terms(self):
        return [(c, ("YD", t, z)) for c, t, z in self.terms]

    @property
    def denominator_terms(self):
        return [(c, ("D", t, z)) for c, t, z in self.terms]

    def evaluate(self, moments):
        """Value on ObservableMoments; returns (value, denominator of the first ratio)."""
        num = sum((c * moments.yd[t][z] for c, t, z in self.terms), Fraction(0))
        den = sum((c * moments.d[t][z] for c, t, z in self.terms), Fraction(0))
        if den == 0:
            raise ZeroDivisionError("estimand denominator is zero")
        value = num / den
        if self.kind == "difference":
            value -= self.second.evaluate(moments)[0]
        return value, den


def build_mean_estimand(combo, n_treatments=2):
    terms = tuple((Fraction(a), combo.t, z) for z, a in enumerate(combo.alpha) if a != 0)
    return EstimandFormula(terms, "mean", None, n_treatments == 2)


def build_te_estimand(coll, n_treatments=2):
    """Difference of the two mean ratios, t' minus t, left uncombined."""
    first = tuple((Fraction(a), coll.t_prime, z) for z, a in enumerate(coll.alpha_t_prime) if a != 0)
    second = tuple((Fraction(a), coll.t, z) for z, a in enumerate(coll.alpha_t) if a != 0)
    binary = n_treatments == 2
    return EstimandFormula(first, "difference", EstimandFormula(second, "mean", None, binary), binary)


def format_coef(x):
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    if x.denominator in DECIMAL_DENOMINATORS:
        # exact: every such denominator divides 100
        whole, frac = divmod(abs(x.numerator) * (100 // x.denominator), 100)
        s = "%s%d.%02d" % ("-" if x < 0 else "", whole, frac)
        return s.rstrip("0")
    return "%d/%d" % (x.numerator, x.denominator)


def _moment(kind, t, z, binary, style):
    if style == "latex":
        if binary:
            d = "D" if t == 1 else "(1-D)"
        else:
            d = "D^{[%d]}" % t
        inner = ("Y %s" % d) if kind == "YD" else d
        return r"\mathbb{E}[%s \mid Z=%d]" % (inner, z)
    if binary:
        d = "D" if t == 1 else "(1-D)"
        dd = "D" if t == 1 else "1-D"
    else:
        d = dd = "D^[%d]" % t
    return "E[Y·%s|Z=%d]" % (d, z) if kind == "YD" else "E[%s|Z=%d]" % (dd, z)


def _ordered(terms):
    # positive coefficients first, each group by instrument value
    return sorted(terms, key=lambda x: (x[0] < 0, x[2]))


def _sum(terms, kind, binary, style):
    parts = []
    for i, (c, t, z) in enumerate(_ordered(terms)):
        m = _moment(kind, t, z, binary, style)
        mag = abs(c)
        body = m if mag == 1 else "%s%s%s" % (format_coef(mag), " " if style == "latex" else "·", m)
        if i == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    text = " ".join(parts)
    return text, len(terms)


def _ratio(f, style):
    num, n = _sum(f.terms, "YD", f.binary, style)
    den, _ = _sum(f.terms, "D", f.binary, style)
    if style == "latex":
        return r"\frac{%s}{%s}" % (num, den)
    if n > 1:
        return "(%s) / (%s)" % (num, den)
    return "%s / %s" % (num, den)


def render_formula(f, style="text"):
    if style not in ("text", "latex"):
        raise ValueError("style must be text or latex")
    out = _ratio(f, style)
    if f.kind == "difference":
        out += " - " + _ratio(f.second, style)
    return out


# ---------------------------------------------------------------- catalogs

def _vec(v):
    return "(" + ", ".join(format_coef(x) for x in v) + ")'"


def _latex_entry(e):
    lines = [r"\subsubsection*{%s}" % e.sm_id, r"$$ A= \begin{bmatrix}"]
    for row in e.model.rows:
        lines.append(" & ".join(str(v) for v in row) + r"\\")
    lines.append(r"\end{bmatrix} $$")
    lines.append(r"\begin{enumerate}[i)]")
    for c in e.collections:
        lines.append(r"\item $(t',t)=(%d,%d)$; $\alpha_{t'}=%s; \alpha_{t}=%s$; $c=%s$"
                     % (c.t_prime, c.t, _vec(c.alpha_t_prime), _vec(c.alpha_t), _vec(c.c)))
    lines.append(r"\end{enumerate}")
    return "\n".join(lines)


def _ratstr(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else "%d/%d" % (x.numerator, x.denominator)


def catalog_to_json(catalog):
    return {
        "treatments": catalog.spec.n_treatments,
        "instruments": catalog.spec.n_instruments,
        "entries": [{
            "sm_id": e.sm_id,
            "rows": e.model.rows,
            "collections": [{
                "t_prime": c.t_prime, "t": c.t,
                "alpha_t_prime": [_ratstr(x) for x in c.alpha_t_prime],
                "alpha_t": [_ratstr(x) for x in c.alpha_t],
                "c": list(c.c),
            } for c in e.collections],
        } for e in catalog.entries],
    }


def catalog_from_json(doc):
    if isinstance(doc, str):
        doc = json.loads(doc)
    spec = Spec(doc["instruments"], doc["treatments"])
    cat = Catalog(spec)
    for e in doc["entries"]:
        rows = e["rows"]
        model = SelectionModel(spec, [tuple(r[j] for r in rows) for j in range(len(rows[0]))])
        colls = [BinaryCollection(c["t_prime"], c["t"],
                                  tuple(Fraction(x) for x in c["alpha_t_prime"]),
                                  tuple(Fraction(x) for x in c["alpha_t"]),
                                  tuple(c["c"])) for c in e["collections"]]
        cat.entries.append(CatalogEntry(e["sm_id"], model, colls))
    return cat


def _text_entry(e, binary):
    lines = [e.sm_id]
    for row in e.model.rows:
        lines.append("  " + " ".join(str(v) for v in row))
    for i, c in enumerate(e.collections, 1):
        lines.append("  %d) (t',t)=(%d,%d) alpha_t'=%s alpha_t=%s c=%s"
                     % (i, c.t_prime, c.t, _vec(c.alpha_t_prime), _vec(c.alpha_t), _vec(c.c)))
        f = build_te_estimand(c, 2 if binary else 3)
        lines.append("     " + render_formula(f, "text"))
    return "\n".join(lines)


def emit_catalog(catalog, format="latex"):
    spec = catalog.spec
    if format == "json":
        return json.dumps(catalog_to_json(catalog), indent=1, sort_keys=True) + "\n"
    if format == "latex":
        head = r"\subsection{%d treatments, %d instrument values}" % (spec.n_treatments, spec.n_instruments)
        return "\n".join([head] + [_latex_entry(e) for e in catalog.entries]) + "\n"
    if format == "text":
        head = "# %d treatments, %d instrument values" % (spec.n_treatments, spec.n_instruments)
        binary = spec.n_treatments == 2
        return "\n".join([head] + [_text_entry(e, binary) for e in catalog.entries]) + "\n"
    raise ValueError("unknown format %r" % (format,))
