import pytest

from oblock.block import make_block
from oblock.oracles import (
    VerificationReport, dihedral_kl_oracle, sl2_block_oracle, sl2_dataset, verify_all_walls, verify_block,
)
from oblock.block import get_group


def test_sl2_dataset_matches():
    assert sl2_dataset(make_block("A1")) == sl2_block_oracle()


def test_dihedral_oracle_examples():
    a1 = get_group("A1")
    assert dict(dihedral_kl_oracle(a1).entries) == {(0, 0): 1, (0, 1): 1, (1, 1): 1}
    a2 = get_group("A2")
    assert len([k for k in dihedral_kl_oracle(a2).entries if k[0] != k[1]]) == 13
    with pytest.raises(ValueError):
        dihedral_kl_oracle(get_group("A3"))


def test_verify_examples():
    rep = verify_block(make_block("A1"))
    assert rep.passed and rep["oracle.sl2"].passed
    assert verify_block(make_block("A2", [1])).passed
    a3 = verify_block(make_block("A3"))
    assert a3.passed
    assert a3.observations["non_rigid"] == ["2", "1,3"]
    assert a3.observations["graded_domination_failures"] == []
    assert VerificationReport.from_json(a3.to_json()).to_json() == a3.to_json()


@pytest.mark.parametrize("label", ["A1", "A2", "A3", "B2", "B3", "G2", "A1xA1"])
def test_verify_all_walls(label):
    reports = verify_all_walls(label)
    assert len(reports) == 2 ** get_group(label).rank
    failed = [(r.block.label, f.id, f.witness) for r in reports for f in r.failures()]
    assert failed == []


def test_failures_are_reported(monkeypatch):
    from oblock import oracles
    b = make_block("A2")
    monkeypatch.setattr(oracles, "tilting_character", lambda b, x, verify=True: oracles.verma_layers(b, x))
    rep = verify_block(b, group_checks=False)
    assert not rep.passed
    assert rep["tilting.loewy_length"].witness["x"] == "e"
