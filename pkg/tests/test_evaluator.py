import json

import pytest

from amr_intens.evaluator import (
    EnumerationBound,
    EvalError,
    Model,
    Signature,
    distinguishing_model,
    entails,
    enumerate_models,
    equivalent,
    evaluate,
    model_count,
    signature_of,
)
from amr_intens.scope import derive_reading
from amr_intens.stlc import Const, E, T, arrow, read_term
from amr_intens.translate_ext import translate_ext_closed
from amr_intens.translate_int import translate_int_closed

from gen import fixture, witness_actual_violin, witness_de_dicto_only

W0, W1 = "w0", "w1"


@pytest.mark.parametrize(
    "signature, worlds, individuals, expected",
    [
        (Signature(predicates=("p",)), 1, 1, 2),
        (Signature(predicates=("p",), content=True), 1, 1, 4),
        (Signature(predicates=("p",)), 2, 1, 4),
    ],
)
def test_model_counts(signature, worlds, individuals, expected):
    bound = EnumerationBound(worlds, individuals)
    models = list(enumerate_models(signature, bound))
    assert len(models) == expected == model_count(signature, worlds, individuals)
    assert len({m.dumps() for m in models}) == expected


def test_count_closed_form_with_roles_and_constants():
    sig = Signature(predicates=("p",), roles=("R",), constants=("j",))
    assert model_count(sig, 1, 2) == 2 ** (2 + 4) * 2
    assert len(list(enumerate_models(sig, EnumerationBound(1, 2)))) == 128


def test_enumeration_cap():
    sig = Signature(predicates=("p", "q"), roles=("R",))
    with pytest.raises(EvalError):
        list(enumerate_models(sig, EnumerationBound(2, 3), cap=1000))


def test_bound_must_be_positive():
    with pytest.raises(ValueError):
        EnumerationBound(0, 2)


def test_eval_one_boy():
    m = Model(("w0",), ("d0",), predicates={("boy", "w0"): frozenset({"d0"})})
    assert evaluate(m, "w0", read_term("exists b . boy(b)"))
    assert not evaluate(m, "w0", read_term("exists b . dog(b)"))


def test_eval_errors():
    m = Model(("w0",), ("d0",))
    with pytest.raises(EvalError):
        evaluate(m, "w9", read_term("exists b . boy(b)"))
    with pytest.raises(EvalError):
        evaluate(m, "w0", Const("j", E))
    with pytest.raises(EvalError):
        evaluate(m, "w0", read_term("exists b . odd(b)(true)", signature={"odd": arrow(E, T, T)}))


def test_model_validation():
    with pytest.raises(ValueError):
        Model(("w0",), ("d0",), predicates={("boy", "w0"): frozenset({"d7"})})
    with pytest.raises(ValueError):
        Model(("w0",), ("d0",), content={("d0", "w0"): frozenset({"w5"})})


def test_model_json_round_trip():
    m = witness_de_dicto_only()
    again = Model.from_json(json.loads(m.dumps()))
    assert again.to_json() == m.to_json()


def test_cont_is_universal_over_content_worlds():
    m = witness_de_dicto_only()
    holds = read_term("\\w . exists h . cont(h)(\\w2 . exists v . violin(v)(w2))(w)")
    fails = read_term("\\w . exists h . hope-01(h)(w) & cont(h)(\\w2 . exists v . boy(v)(w2))(w)")
    assert evaluate(m, W0, holds)
    assert not evaluate(m, W0, fails)


def test_de_re_de_dicto_witnesses():
    de_re = derive_reading(fixture("de_re"))
    de_dicto = derive_reading(fixture("de_dicto"))
    m = witness_de_dicto_only()
    assert evaluate(m, W0, de_dicto) and not evaluate(m, W0, de_re)
    m2 = witness_actual_violin()
    assert evaluate(m2, W0, de_dicto) and evaluate(m2, W0, de_re)


def test_entails_reflexive():
    phi = translate_int_closed(fixture("believe"))
    assert entails(phi, phi, EnumerationBound(2, 2)).entailed


def test_flat_believe_entails_sick_girl():
    verdict = entails(
        translate_ext_closed(fixture("believe_flat")),
        translate_ext_closed(fixture("sick_girl")),
        EnumerationBound(2, 3),
    )
    assert verdict.entailed and str(verdict) == "entailed-within-bound"
    assert verdict.counterexample is None


def test_content_believe_counterexample():
    premise = translate_int_closed(fixture("believe_content"))
    conclusion = translate_int_closed(fixture("sick_girl"))
    verdict = entails(premise, conclusion, EnumerationBound(2, 3))
    assert not verdict.entailed and str(verdict) == "counterexample"
    m = verdict.counterexample
    assert evaluate(m, verdict.actual, premise) and not evaluate(m, verdict.actual, conclusion)
    assert verdict.to_json()["counterexample"] == m.to_json()


def test_sickness_only_in_belief_world():
    premise = translate_int_closed(fixture("believe_content"))
    conclusion = translate_int_closed(fixture("sick_girl"))
    m = Model(
        (W0, W1),
        ("d0", "d1"),
        predicates={
            ("believe-01", W0): frozenset({"d0"}),
            ("boy", W0): frozenset({"d1"}),
            ("sick-05", W1): frozenset({"d0"}),
            ("girl", W1): frozenset({"d1"}),
        },
        roles={("ARG0", W0): frozenset({("d0", "d1")}), ("ARG1", W1): frozenset({("d0", "d1")})},
        content={("d0", W0): frozenset({W1})},
    )
    assert evaluate(m, W0, premise) and not evaluate(m, W0, conclusion)


@pytest.mark.parametrize(
    "premise, conclusion",
    [
        ("believe_content", "sick_girl"),
        ("believe_flat", "sick_girl"),
        ("sick_girl", "believe_flat"),
        ("de_dicto", "believe"),
        ("hug", "admire"),
    ],
)
def test_sat_agrees_with_enumeration(premise, conclusion):
    bound = EnumerationBound(1, 2)
    regime = translate_ext_closed if premise == "believe_flat" or conclusion == "believe_flat" else translate_int_closed
    p, c = regime(fixture(premise)), regime(fixture(conclusion))
    sig = signature_of(p, c)
    if model_count(sig, 1, 2) > 5_000:
        bound = EnumerationBound(1, 1)
    by_sat = entails(p, c, bound, method="sat")
    by_enum = entails(p, c, bound, method="enumerate")
    assert by_sat.entailed == by_enum.entailed
    if not by_sat.entailed:
        assert by_sat.counterexample.to_json() == by_enum.counterexample.to_json()


def test_sat_agrees_on_quantifiers():
    every = derive_reading(fixture("every_boy_scope"), "extensional")
    some = read_term("exists b . boy(b)")
    two = read_term("two(boy)(\\b . dog(b))", signature={"boy": arrow(E, T)})
    every_w = derive_reading(fixture("every_boy_scope"), "intensional")
    some_w = read_term("\\w . exists b . boy(b)(w)")
    bound = EnumerationBound(2, 2)
    pairs = [(every, some), (some, every), (two, some), (some, two), (every_w, some_w), (some_w, every_w)]
    for p, c in pairs:
        a = entails(p, c, bound, method="sat")
        b = entails(p, c, bound, method="enumerate")
        assert a.entailed == b.entailed
        if not a.entailed:
            assert a.counterexample.to_json() == b.counterexample.to_json()


def test_actual_world_argument():
    premise = translate_int_closed(fixture("believe_content"))
    conclusion = translate_int_closed(fixture("sick_girl"))
    verdict = entails(premise, conclusion, EnumerationBound(2, 2), actual="w1")
    assert verdict.actual == "w1"
    assert evaluate(verdict.counterexample, "w1", premise)


def test_deferred_binding_law_on_all_models():
    psi = read_term("boy(j)", signature={"j": E})
    separate = read_term("boy(j) & (exists x . boy(x) & ARG0(x)(j))", signature={"j": E})
    joined = read_term("exists x . boy(j) & boy(x) & ARG0(x)(j)", signature={"j": E})
    sig = signature_of(separate, joined, psi)
    checked = 0
    for worlds in (1, 2):
        for individuals in (1, 2):
            for m in enumerate_models(sig, EnumerationBound(worlds, individuals)):
                assert evaluate(m, "w0", separate) == evaluate(m, "w0", joined)
                checked += 1
    assert checked > 1000


def test_deferred_binding_law_intensional():
    separate = read_term("\\w . (exists y . boy(y)(w)) & (exists x . ARG0(x)(x)(w))")
    joined = read_term("\\w . exists x . (exists y . boy(y)(w)) & ARG0(x)(x)(w)")
    sig = signature_of(separate, joined)
    for worlds in (1, 2):
        for individuals in (1, 2):
            for m in enumerate_models(sig, EnumerationBound(worlds, individuals)):
                for w in m.worlds:
                    assert evaluate(m, w, separate) == evaluate(m, w, joined)


def test_equivalence_is_mutual_entailment():
    bound = EnumerationBound(2, 2)
    re_, dicto = derive_reading(fixture("de_re")), derive_reading(fixture("de_dicto"))
    both = entails(re_, dicto, bound).entailed and entails(dicto, re_, bound).entailed
    assert equivalent(re_, dicto, bound) == both
    assert distinguishing_model(re_, dicto, bound) is not None
    assert equivalent(re_, re_, bound)


def test_mismatched_types_rejected():
    with pytest.raises(EvalError):
        entails(read_term("boy"), read_term("exists b . boy(b)"), EnumerationBound(1, 1))
