import sys

import numpy as np
import pytest

from ghz_atlas.enumerator import classification


@pytest.fixture(scope="session")
def n4_classes():
    """{size: ClassificationResult} for four sites (computed once per session)."""
    return classification(4)


@pytest.fixture(scope="session")
def all_n4_entries(n4_classes):
    return [c for res in n4_classes.values() for c in res.classes]


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    RESULTS = getattr(mod, "RESULTS", None)
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[k])
