import pytest

from oblock.block import (
    BlockDescriptor, GradedFlag, LayeredCharacter, dim_end_projective, graded_verma_multiplicity,
    make_block, projective_flag, verma_layers,
)
from oblock.errors import NotInBlockError
from oblock.polynomials import LaurentV

from conftest import sweep_blocks


def names(layer):
    return {str(z): m for z, m in layer.items()}


def test_block_examples():
    assert len(make_block("A2")) == 6
    b = make_block("A2", [1])
    assert len(b) == 3 and str(b.w0_lambda) == "s1"
    assert len(make_block("A1", [1])) == 1
    assert make_block("A2", [1]) == BlockDescriptor.from_json({"type": "A2", "walls": [1]})


def test_not_in_block_names_representative():
    b = make_block("A2", [1])
    with pytest.raises(NotInBlockError, match="s1s2"):
        b.check(b.group.simple(2))
    assert str(b.representative(b.group.simple(2))) == "s1s2"


def test_graded_multiplicities():
    a1 = make_block("A1")
    assert graded_verma_multiplicity(a1, a1.group.e, a1.group.simple(1)) == LaurentV({1: 1})
    a3 = make_block("A3")
    g = a3.group
    assert str(graded_verma_multiplicity(a3, g.e, g.parse("2,1,3,2"))) == "v^2 + v^4"


def test_verma_layers_examples():
    b = make_block("A2")
    lay = verma_layers(b, b.group.e)
    assert [names(lay.layer(k)) for k in range(4)] == [
        {"e": 1}, {"s1": 1, "s2": 1}, {"s1s2": 1, "s2s1": 1}, {"s1s2s1": 1}]
    sb = make_block("A2", [1])
    lay = verma_layers(sb, sb.group.simple(1))
    assert [names(lay.layer(k)) for k in lay.degrees()] == [{"s1": 1}, {"s1s2": 1}, {"s1s2s1": 1}]
    assert verma_layers(sb, sb.group.w0).n_layers == 1


def test_projective_examples():
    a1 = make_block("A1")
    g = a1.group
    assert projective_flag(a1, g.simple(1)) == GradedFlag(a1, {(g.e, 1): 1, (g.simple(1), 0): 1})
    assert dim_end_projective(a1, g.e) == 1
    assert dim_end_projective(a1, g.simple(1)) == 2
    a2 = make_block("A2")
    flag = projective_flag(a2, a2.group.w0)
    assert flag.entries == {(z, a2.group.w0.length - z.length): 1 for z in a2.group}


@pytest.mark.parametrize("b", list(sweep_blocks()), ids=lambda b: b.label)
def test_block_invariants(b):
    g = b.group
    assert dim_end_projective(b, g.w0) == len(b)
    for x in b:
        lay = verma_layers(b, x)
        assert lay.n_layers == g.w0.length - x.length + 1
        assert lay.layer(0) == {x: 1}
        assert lay.layer(g.w0.length - x.length) == {g.w0: 1}
        assert graded_verma_multiplicity(b, x, g.w0)(1) == 1
        assert projective_flag(b, x).multiplicity(x, 0) == 1
        for y in b:
            d = graded_verma_multiplicity(b, x, y)
            assert bool(d) == g.bruhat_leq(x, y)
            if y != x and d:
                assert min(d.degrees()) >= 1


def test_json_round_trip():
    b = make_block("B3", [2])
    x = b.reps[0]
    lay = verma_layers(b, x)
    assert LayeredCharacter.from_json(b, lay.to_json()) == lay
    flag = projective_flag(b, x)
    assert GradedFlag.from_json(b, flag.to_json()) == flag
