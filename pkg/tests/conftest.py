import pytest

from oblock.block import get_group, make_block
from oblock.coxeter import all_subsets

SWEEP_TYPES = ("A1", "A2", "A3", "B2", "B3", "G2", "A1xA1")


def sweep_blocks():
    """Every block (all wall subsets) of the desk-scale sweep."""
    for label in SWEEP_TYPES:
        g = get_group(label)
        for walls in all_subsets(g.rank):
            yield make_block(g, walls)


@pytest.fixture
def a2():
    return get_group("A2")


@pytest.fixture
def a3():
    return get_group("A3")


@pytest.fixture
def w(request):
    """``w("A2", "1,2")`` shorthand for group elements."""
    return lambda label, word: get_group(label).parse(word)
