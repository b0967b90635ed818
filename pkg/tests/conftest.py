from __future__ import annotations

import sys

import pytest

from morphcast.catalog import builtin_catalog
from morphcast.model import builtin_generations


@pytest.fixture(scope="session")
def catalog():
    return builtin_catalog()


@pytest.fixture(scope="session")
def generations():
    return {s.id: s for s in builtin_generations()}


@pytest.fixture(scope="session")
def s3(generations):
    return generations["S3"]


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])
