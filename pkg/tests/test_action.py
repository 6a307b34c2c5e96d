"""Action tables: axiom audits, compatibility, serialization."""

from __future__ import annotations

import pytest

from etacalc.action import (
    ActionPair,
    ActionTable,
    check_compatibility,
    conjugation_pair,
    incompatible_example,
    pair_from_json_dict,
    require_compatible,
    trivial_pair,
    validate_action,
)
from etacalc.errors import IncompatibleActionError, InvalidActionError
from etacalc.groups import builtin, cyclic, symmetric3


def test_action_table_validation():
    with pytest.raises(ValueError):
        ActionTable(2, 3, ((0, 1, 2), (0, 1)))
    with pytest.raises(ValueError):
        ActionTable(1, 2, ((0, 2),))
    with pytest.raises(ValueError):
        ActionTable.from_rows([])
    t = ActionTable.trivial(2, 4)
    assert t.is_trivial()
    assert t.apply(1, 3) == 3
    nontrivial = ActionTable.from_rows([[0, 1], [1, 0]])
    assert not nontrivial.is_trivial()


def test_action_table_json():
    t = ActionTable.from_rows([[0, 2, 1], [0, 1, 2]])
    data = t.to_json_dict()
    assert data["schema"] == 1
    assert ActionTable.from_json_dict(data) == t
    with pytest.raises(ValueError):
        ActionTable.from_json_dict({"rows": [[0]]})
    with pytest.raises(ValueError):
        ActionTable.from_json_dict({"schema": 1, "rows": [[0, 1]], "acted_size": 3})


def test_validate_action_accepts_conjugation():
    s3 = symmetric3()
    pair = conjugation_pair(s3)
    assert validate_action(pair.g_on_h, acted=s3, acting=s3) == []
    assert pair.is_conjugation()
    assert not trivial_pair(s3, s3).is_conjugation()


def test_validate_action_reports_each_axiom():
    c3 = cyclic(3)
    c2 = cyclic(2)
    # identity row replaced by the inversion automorphism
    swapped = ActionTable.from_rows([[0, 2, 1], [0, 2, 1]])
    report = validate_action(swapped, acted=c3, acting=c2)
    axioms = {entry["axiom"] for entry in report}
    assert axioms == {"identity-row", "composition"}
    identity_rows = [e for e in report if e["axiom"] == "identity-row"]
    assert {e["acted"] for e in identity_rows} == {1, 2}
    broken = ActionTable.from_rows([[0, 1, 2], [0, 1, 1]])
    report = validate_action(broken, acted=c3, acting=c2)
    assert any(e["axiom"] == "row-bijection" and e["acting"] == 1 for e in report)
    with pytest.raises(ValueError):
        validate_action(ActionTable.trivial(2, 3), acted=c3, acting=c3)


def test_invalid_pair_cites_table_and_axiom():
    s3 = symmetric3()
    good = conjugation_pair(s3)
    rows = [list(row) for row in good.g_on_h.rows]
    a = next(x for x in s3.elements() if s3.element_order(x) == 3)
    rows[a][0], rows[a][1] = rows[a][1], rows[a][0]
    with pytest.raises(InvalidActionError) as exc:
        ActionPair(s3, s3, ActionTable.from_rows(rows), good.h_on_g)
    report = exc.value.report
    assert report
    assert all(entry["table"] == "g_on_h" for entry in report)
    assert any(entry["axiom"] == "row-homomorphism" for entry in report)


def test_conjugation_and_trivial_pairs_are_compatible():
    for name in ["C2", "C6", "S3", "D8", "Q8", "A4"]:
        assert check_compatibility(conjugation_pair(builtin(name))) == []
    assert check_compatibility(trivial_pair(builtin("C2"), builtin("C3"))) == []
    assert check_compatibility(trivial_pair(builtin("D8"), builtin("C6"))) == []
    require_compatible(conjugation_pair(builtin("S3")))


def test_automorphism_action_with_trivial_reverse_is_compatible():
    c4, c3 = cyclic(4), cyclic(3)
    inversion = [0, 2, 1]
    g_on_h = ActionTable.from_rows(
        [list(range(3)), inversion, list(range(3)), inversion]
    )
    pair = ActionPair(c4, c3, g_on_h, ActionTable.trivial(3, 4))
    assert check_compatibility(pair) == []


def test_incompatible_pair_reports_failing_triples():
    pair = incompatible_example()
    failures = check_compatibility(pair)
    assert failures
    assert all(f["family"] == 1 for f in failures)
    s3 = pair.g
    assert any(s3.element_order(f["g1"]) == 3 for f in failures)
    for f in failures:
        assert f["lhs"] != f["rhs"]
        assert f["lhs_label"] == s3.labels[f["lhs"]]
    with pytest.raises(IncompatibleActionError) as exc:
        require_compatible(pair)
    assert exc.value.report == failures


def test_swapping_the_pair_mirrors_the_families():
    pair = incompatible_example()
    swapped = ActionPair(pair.h, pair.g, pair.h_on_g, pair.g_on_h)
    forward = check_compatibility(pair)
    mirrored = check_compatibility(swapped)
    assert len(mirrored) == len(forward)
    assert all(f["family"] == 2 for f in mirrored)
    ok = conjugation_pair(builtin("D8"))
    assert check_compatibility(ActionPair(ok.h, ok.g, ok.h_on_g, ok.g_on_h)) == []


def test_pair_json_round_trip():
    pair = conjugation_pair(builtin("D8"))
    data = pair.to_json_dict()
    assert data["schema"] == 1
    loaded = pair_from_json_dict(data)
    assert loaded == pair
    with pytest.raises(ValueError):
        pair_from_json_dict({"schema": 2})
    partial = {k: v for k, v in data.items() if k != "h_on_g"}
    with pytest.raises(ValueError):
        pair_from_json_dict(partial)


def test_pair_json_renumbers_identity_to_zero():
    pair = conjugation_pair(symmetric3())
    data = pair.to_json_dict()
    # relabel the group so its identity lands at index 3
    n = 6
    sigma = [3, 0, 1, 2, 4, 5]
    table = [[0] * n for _ in range(n)]
    labels = [""] * n
    rows = [[0] * n for _ in range(n)]
    for a in range(n):
        labels[sigma[a]] = data["g"]["labels"][a]
        for b in range(n):
            table[sigma[a]][sigma[b]] = sigma[data["g"]["table"][a][b]]
            rows[sigma[a]][sigma[b]] = sigma[data["g_on_h"]["rows"][a][b]]
    group_json = {"schema": 1, "table": table, "labels": labels}
    action_json = {"schema": 1, "rows": rows}
    loaded = pair_from_json_dict(
        {
            "schema": 1,
            "g": group_json,
            "h": group_json,
            "g_on_h": action_json,
            "h_on_g": action_json,
        }
    )
    assert loaded.g.identity == 0
    assert loaded.g.labels[0] == "e"
    assert loaded.is_conjugation()
    assert check_compatibility(loaded) == []
