import json
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import settings

from oaid.ident import BinaryCollection
from oaid.space import Spec, model_from_rows

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

DATA = Path(__file__).parent / "data"


def load_reference():
    """Reference catalog entries keyed by id: (model, [BinaryCollection])."""
    out = {}
    for e in json.loads((DATA / "reference_catalog.json").read_text()):
        k = int(e["sm_id"].split(".")[1])
        model = model_from_rows(e["rows"], k)
        colls = [BinaryCollection(c["t_prime"], c["t"],
                                  tuple(Fraction(x) for x in c["alpha_t_prime"]),
                                  tuple(Fraction(x) for x in c["alpha_t"]),
                                  tuple(c["c"])) for c in e["collections"]]
        out[e["sm_id"]] = (model, colls)
    return out


@pytest.fixture(scope="session")
def reference():
    return load_reference()


@pytest.fixture(scope="session")
def small_catalogs():
    from oaid import enumer
    return {(k, z): enumer.enumerate_catalog(Spec(z, k)) for k, z in [(2, 2), (3, 2), (2, 3)]}


# Frozen from this implementation's (2,3) run: reference entries that reappear
# with the identical column set, as (reference id, produced id).
IDENTICAL_23 = {"SM.2.3.4": "SM.2.3.13", "SM.2.3.5": "SM.2.3.24", "SM.2.3.7": "SM.2.3.10",
                "SM.2.3.10": "SM.2.3.15", "SM.2.3.12": "SM.2.3.17", "SM.2.3.13": "SM.2.3.18",
                "SM.2.3.14": "SM.2.3.22", "SM.2.3.17": "SM.2.3.19", "SM.2.3.19": "SM.2.3.20",
                "SM.2.3.20": "SM.2.3.5"}


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
