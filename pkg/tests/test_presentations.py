import pytest
from hypothesis import given, strategies as st

from fpkit.presentations import (
    Kind,
    ParseError,
    Presentation,
    Relation,
    ValidationError,
    Word,
    free_reduce,
    parse_presentation,
    parse_word,
    rename_generators,
    serialize_presentation,
    serialize_word,
    tietze_simplify,
)

W = parse_word


def test_parse_group_example():
    p = parse_presentation("group\ngens: a\nrels: a^5 = 1")
    assert p.kind is Kind.GROUP
    assert p.generators == ("a",)
    assert p.relations == (Relation(W("a^5"), Word()),)


def test_parse_monoid_example():
    p = parse_presentation("monoid\ngens: g\nrels: g g = g")
    assert p.kind is Kind.MONOID
    assert p.relations == (Relation(W("g^2"), W("g")),)


def test_parse_undeclared_generator():
    with pytest.raises(ParseError, match="undeclared generator b"):
        parse_presentation("group\ngens: a\nrels: b = 1")


def test_parse_negative_exponent_in_monoid():
    with pytest.raises(ParseError, match="negative exponent"):
        parse_presentation("monoid\ngens: g\nrels: g^-1 = g")


def test_parse_duplicate_generator():
    with pytest.raises(ParseError, match="duplicate generator"):
        parse_presentation("group\ngens: a, a\nrels:")


def test_parse_reports_line_and_column():
    try:
        parse_presentation("group\ngens: a\nrels: a = ^3")
    except ParseError as exc:
        assert exc.line == 3
    else:
        pytest.fail("expected a parse error")


def test_serialize_examples():
    p = Presentation(Kind.GROUP, ("a",), (Relation(W("a^5"), Word()),))
    assert serialize_presentation(p) == "group\ngens: a\nrels: a^5 = 1\n"
    empty = Presentation(Kind.GROUP, ("a", "b"))
    assert serialize_presentation(empty) == "group\ngens: a, b\nrels:\n"


def test_serialize_zero_line():
    text = "monoid\ngens: x, z\nzero: z\nrels: x z = z, z x = z, z^2 = z\n"
    p = parse_presentation(text)
    assert p.zero == "z"
    assert "zero: z" in serialize_presentation(p)


def test_zero_requires_absorption():
    with pytest.raises(ParseError, match="absorption"):
        parse_presentation("monoid\ngens: x, z\nzero: z\nrels: z^2 = z")


def test_roundtrip_structural_equality():
    texts = [
        "group\ngens: a, b\nrels: a^2 = 1, b^3 = 1, a b a b = 1",
        "monoid\ngens: p, q\nrels: p q = p, q p = q",
        "group\ngens: a\nrels:",
    ]
    for text in texts:
        p = parse_presentation(text)
        assert parse_presentation(serialize_presentation(p)) == p


def test_free_reduce_examples():
    assert free_reduce(W("a a^-1 b"), Kind.GROUP) == W("b")
    assert free_reduce(W("a^2 a^3"), Kind.GROUP) == W("a^5")
    assert free_reduce(Word(), Kind.GROUP) == Word()
    with pytest.raises(ValidationError):
        free_reduce(W("a^-1"), Kind.MONOID)


group_words = st.lists(
    st.tuples(st.sampled_from("abc"), st.integers(-4, 4).filter(bool)), max_size=12
).map(lambda pairs: Word(tuple(pairs)))


@given(group_words)
def test_free_reduce_idempotent_and_cancels(w):
    reduced = free_reduce(w, Kind.GROUP)
    assert free_reduce(reduced, Kind.GROUP) == reduced
    assert reduced.length() <= w.length() or reduced == w
    assert (w * w.inverse()).is_empty


def test_rename_generators():
    p = parse_presentation("group\ngens: a\nrels: a^5 = 1")
    q = rename_generators(p, {"a": "x"})
    assert q.generators == ("x",)
    assert q.relations == (Relation(W("x^5"), Word()),)
    assert rename_generators(p, {}) == p


def test_rename_collision_rejected():
    p = parse_presentation("group\ngens: a, b\nrels:")
    with pytest.raises(ValidationError, match="not injective"):
        rename_generators(p, {"a": "b"})


def test_rename_preserves_counts():
    p = parse_presentation("group\ngens: a, b\nrels: a^2 = 1, a b = b a")
    q = rename_generators(p, {"a": "u", "b": "v"})
    assert len(q.generators) == len(p.generators)
    assert len(q.relations) == len(p.relations)


def test_tietze_eliminates_defined_generator():
    p = parse_presentation("group\ngens: a, b\nrels: b = a^2, a^5 = 1")
    q = tietze_simplify(p)
    assert q.generators == ("a",)
    assert q.relations == (Relation(W("a^5"), Word()),)


def test_tietze_drops_trivial_relation():
    p = parse_presentation("group\ngens: a\nrels: a = a")
    assert tietze_simplify(p) == Presentation(Kind.GROUP, ("a",))


def test_tietze_no_applicable_move():
    p = parse_presentation("group\ngens: a\nrels: a^2 = 1")
    assert tietze_simplify(p) == p


def test_tietze_respects_budget():
    p = parse_presentation("group\ngens: a\nrels: a = a, a = a, a = a")
    q = tietze_simplify(p, max_moves=2)
    assert len(q.relations) == 1


def test_word_text_roundtrip():
    for text in ("1", "a", "a^3 b^-2 a", "x y x"):
        assert serialize_word(W(text)) == text


def test_tietze_eliminates_from_either_side_and_inverse_definitions():
    p = parse_presentation("group\ngens: a, b\nrels: a^2 = b, a^5 = 1")
    q = tietze_simplify(p)
    assert q.generators == ("a",)
    inv_def = parse_presentation("group\ngens: a, b\nrels: b^-1 = a^2, b^3 = 1")
    r = tietze_simplify(inv_def)
    assert r.generators == ("a",)
    # b = a^-2, so b^3 = 1 becomes a^-6 = 1
    assert r.relations == (Relation(W("a^-6"), Word()),)


def test_tietze_never_eliminates_the_zero():
    p = parse_presentation(
        "monoid\ngens: x, z\nzero: z\nrels: x z = z, z x = z, z^2 = z, z = x"
    )
    q = tietze_simplify(p)
    assert q.zero == "z" and "z" in q.generators


def test_parse_word_edge_cases():
    assert W("a 1 b") == W("a b")  # inline identity token is absorbed
    with pytest.raises(ParseError, match="zero exponent"):
        W("a^0")
    with pytest.raises(ParseError, match="bad word token"):
        W("3a")
    with pytest.raises(ParseError, match="bad exponent"):
        W("a^x")


def test_parse_empty_and_trailing_garbage():
    with pytest.raises(ParseError, match="empty presentation"):
        parse_presentation("   \n  ")
    with pytest.raises(ParseError, match="unexpected line"):
        parse_presentation("group\ngens: a\nrels:\nwhat is this")


def test_zero_line_requires_monoid():
    with pytest.raises(ParseError, match="zero line on a group"):
        parse_presentation("group\ngens: a\nzero: a\nrels:")
