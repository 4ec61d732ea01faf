from importlib import resources

import numpy as np
import pytest

from arithrec.ldpc import ParityCheckMatrix, load_alist

# criterion id -> (passed, detail); filled by tests/test_acceptance.py
ACCEPTANCE_RESULTS = {}


@pytest.fixture(scope="session")
def toy_alist_path():
    return str(resources.files("arithrec") / "data" / "toy_3x2.alist")


@pytest.fixture(scope="session")
def toy_H(toy_alist_path):
    return load_alist(toy_alist_path)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS, key=lambda s: (int(s.split()[0].rstrip("abcdefgh")), s)):
        ok, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {key}: {detail}")
