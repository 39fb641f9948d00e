from functools import lru_cache

import pytest
from hypothesis import HealthCheck, settings

from formal_demazure.fga import FormalGroupAlgebra, FormalGroupLaw
from formal_demazure.rootdata import WeylSlice, build_root_datum
from formal_demazure.twisted import TwistedAlgebra

settings.register_profile("default", max_examples=25, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

A2 = ((2, -1), (-1, 2))
B2 = ((2, -1), (-2, 2))
AFF = ((2, -2), (-2, 2))
CONTEXTS = {"A2": A2, "B2": B2, "affine": AFF}

LAWS = {
    "additive": FormalGroupLaw("additive"),
    "multiplicative": FormalGroupLaw("multiplicative"),
    "hyperbolic": FormalGroupLaw("hyperbolic"),
}


@lru_cache(maxsize=None)
def context(cartan, law="hyperbolic", L=2, N=None):
    """(datum, fga, slice, alg) with the default order 2L + 6."""
    datum = build_root_datum([list(r) for r in cartan])
    fga = FormalGroupAlgebra(datum, LAWS[law], N if N is not None else 2 * L + 6)
    sl = WeylSlice(datum, L)
    return datum, fga, sl, TwistedAlgebra(fga, sl)


@pytest.fixture
def a2_hyp():
    return context(A2, "hyperbolic", 2)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
