from fractions import Fraction

import pytest
from hypothesis import settings

from orthopmat.families import (
    BESSEL_Y, CHEBYSHEV_T, CHEBYSHEV_U, CHEBYSHEV_V, CHEBYSHEV_W, HERMITE_H,
    LAGUERRE_L, LEGENDRE_P, Family,
)

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")

PARAMETERLESS = [CHEBYSHEV_T, CHEBYSHEV_U, CHEBYSHEV_V, CHEBYSHEV_W, LEGENDRE_P,
                 LAGUERRE_L, HERMITE_H, BESSEL_Y]
GEGENBAUERS = [Family.gegenbauer(12), Family.gegenbauer(Fraction(1, 7))]
JACOBIS = [Family.jacobi(2, 3), Family.jacobi(20, Fraction(3, 7))]
ALL_FAMILIES = PARAMETERLESS + GEGENBAUERS + JACOBIS
TABLE_FAMILIES = PARAMETERLESS + GEGENBAUERS  # have closed-form N and O


def ids(fams):
    return [f.label() for f in fams]


@pytest.fixture(params=ALL_FAMILIES, ids=ids(ALL_FAMILIES))
def family(request):
    return request.param


@pytest.fixture(params=TABLE_FAMILIES, ids=ids(TABLE_FAMILIES))
def table_family(request):
    return request.param


# -- acceptance summary: one line per criterion ----------------------------------

ACCEPTANCE_RESULTS = {}


@pytest.fixture
def criterion(request):
    """Record the outcome of one acceptance criterion under ``name``."""
    def record(name, detail=""):
        ACCEPTANCE_RESULTS[request.node.nodeid] = [name, detail, None]
    yield record
    entry = ACCEPTANCE_RESULTS.get(request.node.nodeid)
    rep = getattr(request.node, "rep_call", None)
    if entry is not None:
        entry[2] = bool(rep is not None and rep.passed)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, detail, ok in sorted(ACCEPTANCE_RESULTS.values()):
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"{status}  {name}  {detail}")
