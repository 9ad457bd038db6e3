import numpy as np
import pytest

from secmeasure import DEFAULT_SPEC, catalog

_acceptance_lines = []


def record_acceptance(line: str) -> None:
    _acceptance_lines.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _acceptance_lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def spec():
    return DEFAULT_SPEC


@pytest.fixture(scope="session")
def cheb_u():
    return catalog("cheb-u")


@pytest.fixture(scope="session")
def cheb_t():
    return catalog("cheb-t")


@pytest.fixture(scope="session")
def uniform():
    return catalog("uniform")


@pytest.fixture(scope="session")
def linear2x():
    return catalog("linear2x")


@pytest.fixture(scope="session")
def sqrt32():
    return catalog("sqrt32")


@pytest.fixture(scope="session")
def all_catalog(cheb_u, cheb_t, uniform, linear2x, sqrt32):
    return (cheb_u, cheb_t, uniform, linear2x, sqrt32)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
