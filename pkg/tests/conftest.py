import random
from pathlib import Path

import pytest

from blindcounter.blind import Alphabet, BlindAutomaton, Edge

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture
def fixtures():
    return FIXTURES


@pytest.fixture
def rng():
    return random.Random(20071)


@pytest.fixture
def wp_z():
    """One state, a: +1, a': -1."""
    al = Alphabet.from_generators("a")
    return BlindAutomaton(1, al, ("s",), "s", {"s"},
                          (Edge("s", (1,), "a", "s"), Edge("s", (-1,), "a'", "s")))


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
