import pytest

from hbruhat.core import GroundParams
from hbruhat.poset import enumerate_poset


@pytest.fixture(scope="session")
def stores():
    cache = {}

    def get(n, d=2):
        if (n, d) not in cache:
            cache[(n, d)] = enumerate_poset(GroundParams(n, d))
        return cache[(n, d)]

    return get


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
