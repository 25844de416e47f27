import pytest

from oblock.block import GradedFlag, dim_end_projective, make_block
from oblock.errors import InvariantViolation
from oblock.kl import kl_polynomial
from oblock.tilting import (
    RigidityReport, dim_end_tilting, hazi_layers, loewy_length_tilting, rigidity_report,
    socle_multiplicity, tilting_character, tilting_flag, translation_flag,
)

from conftest import sweep_blocks


def flag_of(b, pairs):
    g = b.group
    return GradedFlag(b, {(g.parse(w), j): 1 for w, j in pairs})


def layer_names(ch):
    return {k: {str(z): m for z, m in layer.items()} for k, layer in ch.layers.items()}


def test_sl2():
    b = make_block("A1")
    g = b.group
    assert tilting_flag(b, g.e) == flag_of(b, [("e", 0), ("1", -1)])
    assert layer_names(tilting_character(b, g.e)) == {-1: {"s1": 1}, 0: {"e": 1}, 1: {"s1": 1}}
    assert loewy_length_tilting(b, g.e) == 3
    assert loewy_length_tilting(b, g.w0) == 1
    assert socle_multiplicity(b, g.e) == 1
    assert dim_end_tilting(b, g.e) == 2


def test_singular_a2():
    b = make_block("A2", [1])
    x = b.group.simple(1)
    assert tilting_flag(b, x) == flag_of(b, [("1", 0), ("1,2", -1), ("1,2,1", -2)])
    assert translation_flag(b, x) == tilting_flag(b, x)
    assert layer_names(tilting_character(b, x)) == {
        -2: {"s1s2s1": 1}, -1: {"s1s2": 1}, 0: {"s1": 1, "s1s2s1": 1}, 1: {"s1s2": 1}, 2: {"s1s2s1": 1}}
    assert loewy_length_tilting(b, x) == 5


def test_regular_a2():
    b = make_block("A2")
    g = b.group
    assert loewy_length_tilting(b, g.e) == 7
    assert dim_end_tilting(b, g.e) == 6
    assert all(rigidity_report(b, x).verdict for x in b)
    trace = hazi_layers(b, g.e)
    assert [(str(s.element), s.shift) for s in trace.steps] == [
        ("s1", -1), ("s2", -1), ("s1s2", -2), ("s2s1", -2), ("s1s2s1", -3)]
    assert trace.flag == tilting_flag(b, g.e)


def test_a3_non_rigid_witness():
    b = make_block("A3")
    g = b.group
    x = g.mul(g.w0, g.parse("2,1,3,2"))
    assert socle_multiplicity(b, x) == 2
    r = rigidity_report(b, x)
    assert r.verdict is False and r.dominant_multiplicity == 2
    assert str(r.y) == "s2s1s3s2"
    non_rigid = {x for x in b if not rigidity_report(b, x).verdict}
    assert non_rigid == {x for x in b if kl_polynomial(g, g.e, g.mul(g.w0, x))(1) > 1}
    assert {str(x) for x in non_rigid} == {"s2", "s1s3"}


def test_w0_is_trivial():
    for b in sweep_blocks():
        w0 = b.group.w0
        assert tilting_flag(b, w0).entries == {(w0, 0): 1}
        assert tilting_character(b, w0).layers == {0: {w0: 1}}
        assert rigidity_report(b, w0).verdict
        assert hazi_layers(b, w0).steps == []
        assert dim_end_tilting(b, w0) == 1


@pytest.mark.parametrize("b", list(sweep_blocks()), ids=lambda b: b.label)
def test_tilting_invariants(b):
    g = b.group
    for x in b:
        flag = tilting_flag(b, x)
        assert flag.multiplicity(x, 0) == 1
        for (y, j), _ in flag.entries.items():
            if (y, j) != (x, 0):
                assert j <= -1 and g.bruhat_leq(x, y) and y != x
        ch = tilting_character(b, x)
        top = g.w0.length - x.length
        assert ch.is_symmetric()
        assert ch.degrees() == list(range(-top, top + 1))
        assert ch.count(x, 0) == 1
        assert loewy_length_tilting(b, x) == 2 * top + 1
        assert dim_end_tilting(b, x) == dim_end_projective(b, b.ringel(x))
        report = rigidity_report(b, x)
        assert report.agreement
        assert RigidityReport.from_json(b, report.to_json()) == report
        for reverse in (False, True):
            trace = hazi_layers(b, x, reverse)
            assert trace.character == ch and trace.flag == flag


def test_loewy_mismatch_is_raised(monkeypatch):
    b = make_block("A2")
    from oblock import tilting
    monkeypatch.setattr(tilting, "tilting_character", lambda b, x, verify=True: tilting.verma_layers(b, x))
    with pytest.raises(InvariantViolation):
        tilting.loewy_length_tilting(b, b.group.e)


def test_fast_mode_skips_translation():
    b = make_block("B3", [1, 3])
    x = b.reps[0]
    assert tilting_flag(b, x, verify=False) == tilting_flag(b, x)
