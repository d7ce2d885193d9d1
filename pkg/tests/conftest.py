import pytest

from lieposet.poset import Poset


@pytest.fixture
def example1():
    """The 4-element poset 1 ⪯ 2 ⪯ 3, 4 used throughout the early sections."""
    return Poset.from_pairs([("1", "2"), ("2", "3"), ("2", "4")])


@pytest.fixture
def chain3():
    return Poset.chain(3)


@pytest.fixture
def antichain3():
    return Poset.antichain(3)
