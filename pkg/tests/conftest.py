import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from shagrowth import catalog  # noqa: E402
from shagrowth.curves import minimal_model, tate_local_data  # noqa: E402


@pytest.fixture(scope="session")
def local():
    """local(label, p) -> LocalReductionData of a bundled curve."""
    cache = {}

    def get(label, p):
        if (label, p) not in cache:
            cache[label, p] = tate_local_data(minimal_model(catalog.curve(label))[0], p)
        return cache[label, p]

    return get


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(RESULTS):
        title, failures = RESULTS[k]
        status = "FAIL" if failures else "PASS"
        terminalreporter.write_line(f"CRITERION {k}: {status} ({title})")
        for f in failures:
            terminalreporter.write_line(f"    {f}")
