"""Multiplication-table groups, stock constructions, Cayley presentations."""

from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from etacalc.fpgroup import todd_coxeter
from etacalc.groups import (
    TableGroup,
    alternating4,
    builtin,
    builtin_names,
    cayley_presentation,
    cyclic,
    dihedral,
    direct_product,
    quaternion8,
    regular_permgroup,
    symmetric3,
    table_from_permgroup,
)
from etacalc.perm import Perm, group_from_generators


def test_cyclic():
    c6 = cyclic(6)
    assert c6.n == 6
    assert c6.identity == 0
    assert c6.labels == ("e", "g1", "g2", "g3", "g4", "g5")
    assert c6.mul(2, 5) == 1
    assert c6.inv(2) == 4
    assert c6.element_order(1) == 6
    assert c6.element_order(3) == 2
    assert c6.power(1, 4) == 4
    assert c6.power(1, -1) == 5
    assert c6.is_abelian()
    assert cyclic(1).n == 1


def test_dihedral():
    d8 = dihedral(8)
    assert d8.n == 8
    assert d8.labels == ("e", "r1", "r2", "r3", "s", "sr1", "sr2", "sr3")
    r1, s = 1, 4
    assert d8.element_order(r1) == 4
    assert d8.element_order(s) == 2
    # s r1 s = r1^-1
    assert d8.conj(r1, s) == d8.inv(r1)
    assert not d8.is_abelian()
    assert d8.center_indices() == (0, 2)
    assert d8.derived_indices() == (0, 2)
    assert d8.abelian_invariants().factors == (2, 2)
    with pytest.raises(ValueError):
        dihedral(5)


def test_quaternion():
    q8 = quaternion8()
    assert q8.labels == ("1", "-1", "i", "-i", "j", "-j", "k", "-k")
    i, j, k = 2, 4, 6
    assert q8.mul(i, j) == k
    assert q8.mul(j, i) == 7  # -k
    assert q8.mul(i, i) == 1  # -1
    assert q8.element_order(i) == 4
    assert q8.element_order(1) == 2
    assert q8.center_indices() == (0, 1)
    assert q8.derived_indices() == (0, 1)
    assert q8.abelian_invariants().factors == (2, 2)


def test_symmetric3():
    s3 = symmetric3()
    assert s3.n == 6
    assert s3.labels[0] == "e"
    assert len(s3.derived_indices()) == 3
    assert s3.abelian_invariants().factors == (2,)
    assert s3.pi() == {2, 3}
    assert sorted(s3.element_order(a) for a in s3.elements()) == [1, 2, 2, 2, 3, 3]


def test_alternating4():
    a4 = alternating4()
    assert a4.n == 12
    assert len(a4.derived_indices()) == 4
    assert a4.abelian_invariants().factors == (3,)
    assert sorted(a4.element_order(a) for a in a4.elements()) == [1] + [2] * 3 + [3] * 8


def test_direct_product():
    c6 = direct_product(cyclic(2), cyclic(3))
    assert c6.n == 6
    assert c6.abelian_invariants().factors == (6,)
    assert c6.labels[0] == "(e,e)"
    c2xc6 = builtin("C2xC6")
    assert c2xc6.abelian_invariants().factors == (2, 6)


def test_builtin_registry():
    assert builtin("c4").n == 4
    assert builtin("Q8") == quaternion8()
    assert builtin("V4") == builtin("C2xC2")
    assert builtin("s3") == symmetric3()
    with pytest.raises(ValueError):
        builtin("E8")
    names = builtin_names()
    assert "c12" in names and "d8" in names and "a4" in names
    assert "v4" not in names
    for name in names:
        g = builtin(name)
        assert g.identity == 0


def test_table_validation():
    with pytest.raises(ValueError):
        TableGroup([[0, 1], [1, 1]])  # row not a permutation
    with pytest.raises(ValueError):
        TableGroup([[1, 0, 2], [2, 1, 0], [0, 2, 1]])  # Latin but no identity
    loop5 = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 3, 4, 1, 0],
        [3, 4, 0, 2, 1],
        [4, 2, 1, 0, 3],
    ]
    with pytest.raises(ValueError, match="associativity"):
        TableGroup(loop5)
    with pytest.raises(ValueError):
        TableGroup([[0, 1], [1, 0]], labels=["a", "a"])


def test_subgroup_machinery():
    s3 = symmetric3()
    a3 = s3.derived_indices()
    assert s3.is_subgroup(a3)
    assert s3.is_normal(a3)
    flip = next(a for a in s3.elements() if s3.element_order(a) == 2)
    two = s3.subgroup_closure([flip])
    assert len(two) == 2
    assert s3.is_subgroup(two)
    assert not s3.is_normal(two)
    assert not s3.is_subgroup([0, flip, s3.mul(flip, flip)][:2] + [5, 4])


def test_generating_subset():
    assert cyclic(6).generating_subset() == (1,)
    assert dihedral(8).generating_subset() == (1, 4)
    q8 = quaternion8()
    gens = q8.generating_subset()
    # greedy ascending picks -1 before i, so three generators here
    assert gens == (1, 2, 4)
    assert len(q8.subgroup_closure(gens)) == 8


@settings(max_examples=40, deadline=None)
@given(st.sets(st.integers(min_value=0, max_value=11), max_size=4))
def test_closure_satisfies_lagrange(seed):
    c12 = cyclic(12)
    size = len(c12.subgroup_closure(seed))
    assert 12 % size == 0


def test_abelian_invariants_of_builtins():
    assert builtin("C12").abelian_invariants().factors == (12,)
    assert builtin("C2xC4").abelian_invariants().factors == (2, 4)
    assert builtin("D10").abelian_invariants().factors == (2,)
    assert builtin("D12").abelian_invariants().factors == (2, 2)
    assert builtin("A4").abelian_invariants().factors == (3,)


def test_json_round_trip():
    q8 = quaternion8()
    data = q8.to_json_dict()
    assert data["schema"] == 1
    assert TableGroup.from_json_dict(data) == q8
    with pytest.raises(ValueError):
        TableGroup.from_json_dict({"labels": [], "table": []})
    with pytest.raises(ValueError):
        TableGroup.from_json_dict({"schema": 1})


def test_json_identity_renumbering():
    # C3 presented with its identity at index 2.
    table = [[1, 2, 0], [2, 0, 1], [0, 1, 2]]
    g = TableGroup.from_json_dict({"schema": 1, "table": table, "labels": ["a", "b", "e"]})
    assert g.identity == 0
    assert g.labels[0] == "e"
    assert g.element_order(1) == 3


def test_regular_permgroup():
    s3 = symmetric3()
    reg, perms = regular_permgroup(s3)
    assert reg.order() == 6
    assert reg._free0
    for a in s3.elements():
        for b in s3.elements():
            assert perms[a] * perms[b] == perms[s3.mul(a, b)]
    assert perms[s3.identity].is_identity()
    # the permutation of element a sends the identity point to a
    for a in s3.elements():
        assert perms[a](0) == a


def test_table_from_permgroup():
    g = group_from_generators(
        [Perm.from_cycles(3, [(0, 1)]), Perm.from_cycles(3, [(0, 1, 2)])]
    )
    t = table_from_permgroup(g)
    assert t.n == 6
    assert t.identity == 0
    assert t.labels[0] == "e"
    assert t.abelian_invariants().factors == (2,)
    assert sorted(t.element_order(a) for a in t.elements()) == [1, 2, 2, 2, 3, 3]


def test_cayley_presentation_enumerates_to_group_order():
    for name in ["C1", "C4", "C2xC2", "S3", "D8", "Q8"]:
        g = builtin(name)
        if g.n == 1:
            continue
        pres = cayley_presentation(g)
        assert len(pres.generators) == g.n - 1
        assert len(pres.relators) == (g.n - 1) ** 2
        assert todd_coxeter(pres).n == g.n
    big = direct_product(cyclic(2), alternating4())
    assert todd_coxeter(cayley_presentation(big)).n == 24
