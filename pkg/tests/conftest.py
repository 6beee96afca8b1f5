from functools import lru_cache

import pytest

from qboson.pbw import PBWBasis
from qboson.rootdata import build_root_datum


@lru_cache(maxsize=None)
def basis_for(label, word=None):
    return PBWBasis(build_root_datum(label), word)


@pytest.fixture(scope="session")
def basis():
    return basis_for


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
