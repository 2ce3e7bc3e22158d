import pytest
from hypothesis import given, settings, strategies as st

from amr_intens.amr import Constant, Instance, RoleName, VarRef, instances
from amr_intens.penman import (
    DuplicateInstance,
    EmptyGraph,
    LexError,
    MissingArgument,
    NormalizationError,
    PenmanError,
    UnbalancedParens,
    normalize_inverse_roles,
    parse,
    parse_batch,
    to_penman,
    to_triples,
    tokenize,
)

from gen import fixture, fixture_text, random_graph

HUG = "(h / hug-01 :ARG0 (b / boy) :ARG1 (d / dog))"
BELIEVE_OF = "(b / believe-01 :ARG0 (b2 / boy :ARG1-of (s / sick-05)) :ARG1 s)"
BELIEVE_NORMAL = "(b / believe-01 :ARG0 (b2 / boy) :ARG1 (s / sick-05 :ARG1 b2))"


def test_parse_hug():
    g = parse(HUG)
    assert g == Instance(
        "h",
        "hug-01",
        ((RoleName("ARG0"), Instance("b", "boy")), (RoleName("ARG1"), Instance("d", "dog"))),
    )


def test_parse_simplex():
    assert parse("(b / boy)") == Instance("b", "boy")


def test_reentrancy_becomes_varref():
    g = parse("(b / believe-01 :ARG0 (b2 / boy) :content (s / sick-05 :ARG1 b2))")
    content = g.role_values("content")[0]
    assert content.roles == ((RoleName("ARG1"), VarRef("b2")),)


def test_varref_may_precede_its_instance():
    g = parse("(a / admire-01 :ARG1 b :ARG0 (b / boy))")
    assert g.roles[0][1] == VarRef("b")


def test_constants():
    g = parse('(x / city :polarity - :quant 2 :name "New York" :mode interrogative :op1 +)')
    values = [arg for _, arg in g.roles]
    assert values == [Constant("-"), Constant("2"), Constant('"New York"'), Constant("interrogative"), Constant("+")]


def test_spans_attached():
    g = parse(HUG)
    assert g.span.start == 0 and g.span.end == len(HUG)
    b = g.roles[0][1]
    assert HUG[b.span.start:b.span.end] == "(b / boy)"


def test_spans_do_not_affect_equality():
    assert parse(HUG) == parse("  (h /hug-01\n:ARG0 (b / boy)   :ARG1 (d / dog) )")


def test_comments_ignored():
    assert parse("# the boy\n(b / boy) # trailing") == Instance("b", "boy")


@pytest.mark.parametrize(
    "text, error",
    [
        ("(x / P :ARG0 (x / Q))", DuplicateInstance),
        ("(b / boy", UnbalancedParens),
        ("(b / boy))", PenmanError),
        ("(h / hug-01 :ARG0)", MissingArgument),
        ("", EmptyGraph),
        ("   # only a comment", EmptyGraph),
        ("(b / boy :ARG0 (c / 9cat))", PenmanError),
        ('(b / boy :name "unterminated)', LexError),
        ("(B / boy)", PenmanError),
    ],
)
def test_parse_errors(text, error):
    with pytest.raises(error):
        parse(text)


def test_error_carries_span():
    with pytest.raises(DuplicateInstance) as info:
        parse("(x / P :ARG0 (x / Q))")
    assert info.value.span is not None
    assert "x" in str(info.value)


def test_tokenize_kinds():
    kinds = [t.kind for t in tokenize("(b / boy :ARG0 c)")]
    assert kinds == ["lparen", "symbol", "slash", "symbol", "role", "symbol", "rparen"]


def test_print_simplex():
    assert to_penman(parse("(b / boy)")) == "(b / boy)"


def test_print_hug_single_line():
    assert to_penman(parse(HUG), indent=None) == HUG


def test_print_reentrancy_bare():
    text = to_penman(parse(BELIEVE_NORMAL), indent=None)
    assert text.endswith(":ARG1 b2))")


def test_print_is_indented_by_default():
    text = to_penman(parse(HUG))
    assert text.splitlines() == ["(h / hug-01", "    :ARG0 (b / boy)", "    :ARG1 (d / dog))"]


def test_batch():
    graphs = parse_batch(fixture_text("batch"))
    assert [g.var for g in graphs] == ["b", "h"]


def test_normalize_believe_of():
    normal = normalize_inverse_roles(parse(BELIEVE_OF))
    assert normal == parse(BELIEVE_NORMAL)
    assert set(to_triples(parse(BELIEVE_OF))) == set(to_triples(parse(BELIEVE_NORMAL)))


def test_normalize_identity_without_inverses():
    g = parse(HUG)
    assert normalize_inverse_roles(g) is g


def test_normalize_idempotent():
    once = normalize_inverse_roles(parse(BELIEVE_OF))
    assert normalize_inverse_roles(once) == once


def test_normalize_reroots():
    g = normalize_inverse_roles(parse("(b / boy :ARG0-of (s / see-01 :ARG1 (d / dog)))"))
    assert to_penman(g, indent=None) == "(s / see-01 :ARG0 (b / boy) :ARG1 (d / dog))"


def test_normalize_keeps_content_in_place():
    # e moves under :mod; its mention of d must not pull d out of :content
    g = parse("(t / think-01 :ARG0 (x / boy :ARG0-of (e / eat-01 :ARG1 d)) :mod e :content (d / dog))")
    normal = normalize_inverse_roles(g)
    assert to_penman(normal, indent=None) == (
        "(t / think-01 :ARG0 (x / boy) :mod (e / eat-01 :ARG0 x :ARG1 d) :content (d / dog))"
    )


def test_normalize_orphan():
    with pytest.raises(NormalizationError) as info:
        normalize_inverse_roles(parse("(h / hug-01 :ARG0 (b / boy :ARG0-of (y / see-01)))"))
    assert info.value.var == "y"


def test_triples_hug():
    assert [str(t) for t in to_triples(parse(HUG))] == [
        "instance(h, hug-01)",
        "instance(b, boy)",
        "ARG0(h, b)",
        "instance(d, dog)",
        "ARG1(h, d)",
    ]


def test_triples_simplex():
    assert [tuple(t) for t in to_triples(parse("(b / boy)"))] == [("instance", "b", "boy")]


def test_triples_constant_target():
    assert ("polarity", "x", "-") in [tuple(t) for t in to_triples(parse("(x / go-01 :polarity -)"))]


@pytest.mark.parametrize("name", ["hug", "admire", "believe", "de_re", "intermediate", "nested"])
def test_fixture_round_trip(name):
    g = fixture(name)
    assert parse(to_penman(g)) == g


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_round_trip_and_normalization_properties(seed):
    import random

    g = random_graph(random.Random(seed), content=seed % 2 == 0)
    assert parse(to_penman(g)) == g
    assert parse(to_penman(g, indent=None)) == g
    normal = normalize_inverse_roles(g)
    assert normalize_inverse_roles(normal) == normal
    assert not any(r.inverted for n in instances(normal) for r, _ in n.roles)
    triples = to_triples(g)
    assert set(triples) == set(to_triples(normal))
    n_roles = sum(len(n.roles) for n in instances(g))
    assert len(triples) == len(list(instances(g))) + n_roles
