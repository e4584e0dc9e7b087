import pytest

from stablecoh.catalog import CATALOG, group


P2_GROUPS = [n for n, (_, p) in CATALOG.items() if p == 2]
SMALL = [n for n in CATALOG if group(n).order <= 8]


@pytest.fixture
def klein():
    return group("klein4")


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if not mod or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
