import sys

import pytest

from descend.frontend import build_cfg, parse
from descend.replay import PROGRAMS_DIR


def load_cfg(name):
    return build_cfg(parse((PROGRAMS_DIR / name).read_text()))


@pytest.fixture
def counter():
    return load_cfg("counter.mini")


@pytest.fixture
def fib():
    return load_cfg("fib.mini")


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.report_lines():
        terminalreporter.write_line(line)
