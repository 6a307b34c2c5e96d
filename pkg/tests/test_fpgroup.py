"""Presentation parsing, word algebra, and coset enumeration."""

from __future__ import annotations

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from etacalc.errors import CapacityError, ParseError
from etacalc.fpgroup import (
    CosetTable,
    Presentation,
    Word,
    parse_presentation,
    regular_representation,
    todd_coxeter,
)


def test_word_reduction():
    w = Word((("a", 1), ("a", -1), ("b", 1)))
    assert w.letters == (("b", 1),)
    assert (Word.gen("a") * Word.gen("a").inverse()).is_empty()
    assert Word.gen("a") ** 0 == Word()
    assert (Word.gen("a") ** -2).letters == (("a", -1), ("a", -1))
    assert len(Word.gen("a") ** 3) == 3


def test_word_algebra():
    a, b = Word.gen("a"), Word.gen("b")
    assert a.commutator(b).letters == (("a", -1), ("b", -1), ("a", 1), ("b", 1))
    assert a.conjugate_by(b).letters == (("b", -1), ("a", 1), ("b", 1))
    assert (a * b).inverse().letters == (("b", -1), ("a", -1))
    assert a.commutator(a).is_empty()


def test_word_render():
    a, b = Word.gen("a"), Word.gen("b")
    assert (a * a * a).render() == "a^3"
    assert (a ** -1).render() == "a^-1"
    assert (a * b * b).render() == "a b^2"
    assert Word().render() == "()"
    assert (a ** -2 * b).render() == "a^-2 b"


def test_parse_basic():
    p = parse_presentation("<a,b|a^2,b^3,(a b)^2>")
    assert p.generators == ("a", "b")
    assert len(p.relators) == 3
    assert p.relators[0].letters == (("a", 1), ("a", 1))
    assert p.relators[2].letters == (("a", 1), ("b", 1)) * 2


def test_parse_sugar():
    p = parse_presentation("< a, b | [a, b], a^b a >")
    comm = p.relators[0]
    assert comm.letters == (("a", -1), ("b", -1), ("a", 1), ("b", 1))
    conj = p.relators[1]
    assert conj.letters == (("b", -1), ("a", 1), ("b", 1), ("a", 1))


def test_parse_nested():
    p = parse_presentation("<a,b| ((a b)^2)^-1, [a^2, b^-1] >")
    assert p.relators[0].letters == (("b", -1), ("a", -1)) * 2
    p2 = parse_presentation("<a,b| a^(b a), () >")
    assert p2.relators[0].letters == (
        ("a", -1),
        ("b", -1),
        ("a", 1),
        ("b", 1),
        ("a", 1),
    )
    assert p2.relators[1].is_empty()


def test_parse_star_multiplication():
    p = parse_presentation("<a,b| a*b*a^-1*b^-1 >")
    assert p.relators[0].letters == (("a", 1), ("b", 1), ("a", -1), ("b", -1))


def test_parse_errors_have_position():
    with pytest.raises(ParseError) as exc:
        parse_presentation("<a| b >")
    assert exc.value.line == 1
    assert exc.value.column == 5
    with pytest.raises(ParseError) as exc:
        parse_presentation("<a|\n a^2,\n c >")
    assert exc.value.line == 3
    assert exc.value.column == 2
    with pytest.raises(ParseError):
        parse_presentation("<a| a^ >")
    with pytest.raises(ParseError):
        parse_presentation("a^2")
    with pytest.raises(ParseError):
        parse_presentation("<a| a^2 > trailing")
    with pytest.raises(ParseError):
        parse_presentation("<a| (a >")


def test_presentation_validation():
    with pytest.raises(ValueError):
        Presentation(("a", "a"), ())
    with pytest.raises(ValueError):
        Presentation(("2bad",), ())
    with pytest.raises(ValueError):
        Presentation(("a",), (Word.gen("b"),))
    with pytest.raises(ValueError):
        Presentation((), ())


def test_render_round_trip():
    for text in [
        "<a|a^3>",
        "<a,b|a^2,b^3,(a b)^2>",
        "<a,b|[a,b]>",
        "<a|>",
        "<x1,x2,x3| x1 x2 x3^-2 >",
    ]:
        p = parse_presentation(text)
        assert parse_presentation(p.render()) == p


@settings(max_examples=100, deadline=None)
@given(
    st.lists(
        st.tuples(st.sampled_from("abc"), st.sampled_from([1, -1])),
        min_size=0,
        max_size=12,
    )
)
def test_word_render_round_trip(letters):
    w = Word(tuple(letters))
    p = Presentation(("a", "b", "c"), (w,))
    assert parse_presentation(p.render()).relators[0] == w


def test_todd_coxeter_cyclic():
    t = todd_coxeter(parse_presentation("<a|a^3>"))
    assert t.n == 3
    assert t.status == "complete"
    t.verify_complete()


def test_todd_coxeter_s3():
    t = todd_coxeter(parse_presentation("<a,b|a^2,b^3,(a b)^2>"))
    assert t.n == 6


def test_todd_coxeter_quaternion():
    t = todd_coxeter(parse_presentation("<i,j| i^4, j^2 i^-2, j^-1 i j i >"))
    assert t.n == 8
    g, gen_map = regular_representation(t)
    assert g.order() == 8
    assert sorted(g.element_orders()) == [1, 2, 4, 4, 4, 4, 4, 4]
    assert set(gen_map) == {"i", "j"}
    assert gen_map["i"].order() == 4


def test_todd_coxeter_subgroup():
    p = parse_presentation("<a,b|a^2,b^3,(a b)^2>")
    t = todd_coxeter(p, [Word.gen("b")])
    assert t.n == 2
    t2 = todd_coxeter(parse_presentation("<a|a^4>"), [Word.gen("a") ** 2])
    assert t2.n == 2


def test_todd_coxeter_infinite_capacity():
    with pytest.raises(CapacityError) as exc:
        todd_coxeter(parse_presentation("<a|>"), max_cosets=100)
    assert exc.value.count == 100


def test_todd_coxeter_collapse():
    # Heavy coincidence load: the group is trivial.
    t = todd_coxeter(parse_presentation("<a,b| a b, a^2, a^3 >"))
    assert t.n == 1
    t2 = todd_coxeter(parse_presentation("<a,b| b^-1 a b a^-2, a^-1 b a b^-2 >"))
    assert t2.n == 1


def test_todd_coxeter_deterministic():
    text = "<a,b|a^2,b^3,(a b)^2>"
    t1 = todd_coxeter(parse_presentation(text))
    t2 = todd_coxeter(parse_presentation(text))
    assert t1.rows == t2.rows
    assert json.dumps(t1.to_json_dict(), sort_keys=True) == json.dumps(
        t2.to_json_dict(), sort_keys=True
    )
    assert t1.to_json_dict()["schema"] == 1
    assert t1.to_json_dict()["cosets"] == 6


def test_empty_relators_are_harmless():
    p = Presentation(("a",), (Word(), Word.gen("a") ** 3))
    assert todd_coxeter(p).n == 3


def test_regular_representation_needs_trivial_subgroup():
    p = parse_presentation("<a|a^4>")
    t = todd_coxeter(p, [Word.gen("a") ** 2])
    with pytest.raises(ValueError):
        regular_representation(t)


def test_regular_representation_word_round_trip():
    t = todd_coxeter(parse_presentation("<a,b|a^2,b^3,(a b)^2>"))
    g, gen_map = regular_representation(t)
    assert g.order() == 6
    for p in g.elements():
        assert g.evaluate_word(g.word_for(p)) == p
    a, b = gen_map["a"], gen_map["b"]
    assert (a * b).order() == 2
    assert b.order() == 3


def test_coset_table_column_consistency():
    t = todd_coxeter(parse_presentation("<a,b|a^2,b^3,(a b)^2>"))
    for i in range(2):
        fwd = t.column(i, 1)
        inv = t.column(i, -1)
        for pt in range(t.n):
            assert inv[fwd[pt]] == pt
