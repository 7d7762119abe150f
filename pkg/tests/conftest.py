import numpy as np
import pytest

from hopfreeb.geometry import HopfModel
from hopfreeb.grids import GridSpec


@pytest.fixture
def m():
    return HopfModel(n=2, lam=0.5)


@pytest.fixture
def grid():
    return GridSpec()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    from tests.test_acceptance import SUMMARY

    if SUMMARY:
        terminalreporter.section("acceptance criteria")
        for number in sorted(SUMMARY):
            terminalreporter.write_line(SUMMARY[number])
