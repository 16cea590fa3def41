import os

from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS, TITLES
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        suite, ok, elapsed, bound, failed = RESULTS[n]
        status = "PASS" if ok else "FAIL"
        line = f"{status} criterion {n:2d} [{suite}] {TITLES[n]}: {elapsed:.2f} s of {bound} s"
        if failed:
            line += " | " + "; ".join(f"{r.check}: {r.witness}" for r in failed)
        terminalreporter.write_line(line)
