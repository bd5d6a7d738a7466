import random
from fractions import Fraction

import pytest

from rotiet.generate import random_return_map
from rotiet.induction import InductionStep, apply_step
from rotiet.lengths import FloatingIRE
from rotiet.scheme import Scheme

# the four-letter counterexample, written with ASCII stand-ins a, b, g, d
SIGMA_TEXT = "[g a d | d b] [b | a g]"
SIGMA_LENGTHS = {"a": Fraction(1), "b": Fraction(2), "g": Fraction(1), "d": Fraction(1)}


def sigma_scheme() -> Scheme:
    return Scheme.from_two_row([(("g", "a", "d"), ("d", "b")), (("b",), ("a", "g"))], alphabet="abgd")


@pytest.fixture
def sigma():
    return sigma_scheme()


@pytest.fixture
def sigma_ire():
    return FloatingIRE(sigma_scheme(), SIGMA_LENGTHS)


@pytest.fixture
def sigma_prime_ire():
    return apply_step(FloatingIRE(sigma_scheme(), SIGMA_LENGTHS), InductionStep("le", "inverse", "g", "a"))


_CORPUS = {}


def return_map_corpus(count: int, seed: int, max_d=None):
    """Seeded first return maps, cached across test modules."""
    key = (count, seed, max_d)
    if key not in _CORPUS:
        rng = random.Random(seed)
        _CORPUS[key] = [random_return_map(rng, max_d=max_d) for _ in range(count)]
    return _CORPUS[key]


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
