"""The thirteen acceptance criteria, each run as its verification suite at
window 6 within its time bound.

One PASS/FAIL line per criterion is printed in the terminal summary (see
``conftest.py``).
"""

import time

import pytest

from koszul.report import FAIL
from koszul.suites import CRITERIA, Context, run_suite

WINDOW = 6
RESULTS = {}

TITLES = {
    1: "symbol calculus",
    2: "classical brackets are derived brackets of the symbol",
    3: "ordinary Poisson structures",
    4: "differential Poisson structure on R^{1|1}",
    5: "Delta_P of a genuine P-infinity structure",
    6: "Cartan-type identity for [[d, T^], S^]",
    7: "bialgebroid pencils",
    8: "modular obstruction",
    9: "operator duality",
    10: "fiberwise Fourier layer",
    11: "quantum pullbacks",
    12: "sigma independence",
    13: "mutually dual BV operators",
}


@pytest.mark.parametrize("number", sorted(CRITERIA), ids=lambda n: f"criterion{n:02d}")
def test_criterion(number):
    suite, bound = CRITERIA[number]
    start = time.perf_counter()
    reports = run_suite(suite, Context(seed=0, window=WINDOW))
    elapsed = time.perf_counter() - start
    failed = [r for r in reports if r.status == FAIL]
    ok = not failed and elapsed < bound and reports
    RESULTS[number] = (suite, ok, elapsed, bound, failed)
    assert reports, f"suite {suite} produced no reports"
    assert elapsed < bound, f"{suite} took {elapsed:.2f} s (bound {bound} s)"
    assert not failed, "; ".join(f"{r.check}: {r.witness}" for r in failed)
