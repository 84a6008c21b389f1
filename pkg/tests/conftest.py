import sys

import pytest

from ringcheck import corpus
from ringcheck.compile import compile_algorithm, dummy_extend
from ringcheck.model import Ring, replay
from ringcheck.table import table_of_run


@pytest.fixture(scope="session")
def franklin():
    return corpus.algorithm("franklin")


@pytest.fixture(scope="session")
def dkr():
    return corpus.algorithm("dkr")


@pytest.fixture(scope="session")
def example_run(dkr):
    return replay(dkr, Ring(corpus.EXAMPLE_PIDS), corpus.example_tuples(dkr))


@pytest.fixture(scope="session")
def example_table(dkr, example_run):
    return table_of_run(example_run, dummy_extend(dkr))


@pytest.fixture(scope="session")
def compiled_dkr(dkr):
    return compile_algorithm(dkr)


@pytest.fixture(scope="session")
def compiled_franklin(franklin):
    return compile_algorithm(franklin)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULT_LINES", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
