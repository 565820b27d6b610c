from functools import lru_cache

import pytest

from compgroups.catalog import make_group, parse_spec


@lru_cache(maxsize=None)
def group(text, action="points", seed=0):
    return make_group(parse_spec(text), seed=seed, action=action)


@pytest.fixture
def G():
    return group


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
