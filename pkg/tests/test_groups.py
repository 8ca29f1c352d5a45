import pytest

from qtanner.groups import (
    CyclicGroup,
    DihedralGroup,
    DuplicateElement,
    GeneratorSet,
    GroupTableError,
    IdentityInSet,
    SymmetryViolation,
    TableGroup,
    build_group,
    check_axioms,
    symmetric_closure,
    validate_generators,
)


def test_cyclic_mul():
    g = build_group({"kind": "cyclic", "n": 4})
    assert g.mul(1, 3) == 0
    assert g.inv(1) == 3
    assert g.order == 4


def test_dihedral_order():
    g = build_group({"kind": "dihedral", "n": 3})
    assert g.order == 6


def test_klein_four_table_self_inverse():
    # explicit table of Z2 x Z2
    table = [
        [0, 1, 2, 3],
        [1, 0, 3, 2],
        [2, 3, 0, 1],
        [3, 2, 1, 0],
    ]
    g = build_group({"kind": "table", "table": table})
    for a in g.elements():
        assert g.inv(a) == a


def test_bad_table_rejected():
    # not associative: a random latin-square-ish table
    table = [
        [0, 1, 2],
        [1, 2, 0],
        [2, 1, 0],
    ]
    with pytest.raises(GroupTableError):
        TableGroup(table)


@pytest.mark.parametrize("group", [CyclicGroup(11), CyclicGroup(64), DihedralGroup(5),
                                   DihedralGroup(12)])
def test_axioms_exhaustive_small(group):
    check_axioms(group, exhaustive_limit=64)


def test_validate_symmetric_set():
    g = CyclicGroup(11)
    diag = validate_generators(g, GeneratorSet((1, 10, 3, 8), "A"))
    assert diag.symmetric
    assert diag.delta == 4
    assert diag.connected


def test_validate_missing_inverse():
    g = CyclicGroup(11)
    with pytest.raises(SymmetryViolation):
        validate_generators(g, GeneratorSet((1, 3), "A"))


def test_validate_duplicates_and_identity():
    g = CyclicGroup(5)
    with pytest.raises(DuplicateElement):
        validate_generators(g, GeneratorSet((1, 1, 4), "A"))
    with pytest.raises(IdentityInSet):
        validate_generators(g, GeneratorSet((0, 1, 4), "A"))


def test_validate_disconnected_even_subgroup():
    # {2, 10, 4, 8} generates only the even residues of Z_12
    g = CyclicGroup(12)
    diag = validate_generators(g, GeneratorSet((2, 10, 4, 8), "B"))
    assert diag.symmetric
    assert not diag.connected


def test_connected_matches_bfs_closure():
    g = DihedralGroup(6)
    gens = GeneratorSet(symmetric_closure(g, (7,)), "A")
    diag = validate_generators(g, gens)
    # one reflection generates a subgroup of order 2 only
    assert not diag.connected


def test_bipartite_flag():
    assert validate_generators(CyclicGroup(6), GeneratorSet((1, 5), "A")).bipartite
    # odd cycle
    assert not validate_generators(CyclicGroup(5), GeneratorSet((1, 4), "A")).bipartite


def test_dihedral_inverse_consistency():
    g = DihedralGroup(7)
    for a in g.elements():
        assert g.mul(a, g.inv(a)) == 0
        assert g.mul(g.inv(a), a) == 0
