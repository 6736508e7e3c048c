import random

import pytest

from ctrskit.cops import (
    ArityConflictError,
    ParseError,
    UnknownConditionTypeError,
    VariableAsLhsError,
    parse,
    parse_term,
    render,
    render_rule,
    render_system,
)
from ctrskit.terms import Fun, Symbol, Var

from conftest import CORPUS, load_corpus, random_term

ALL_CORPUS = sorted(p.name for p in CORPUS.glob("*.ctrs"))


def test_parse_fib(fib_spec):
    system = fib_spec.ctrs
    assert fib_spec.condition_type == "ORIENTED"
    assert fib_spec.var_names == ("x", "y", "z")
    assert len(system.rules) == 4
    assert len(system.rules[1].conds) == 1
    assert {s.name: s.arity for s in system.symbols} == {
        "fib": 1, "pair": 2, "add": 2, "s": 1, "0": 0,
    }


def test_parse_rejects_unknown_condition_type():
    with pytest.raises(UnknownConditionTypeError, match="only ORIENTED supported"):
        parse("(CONDITIONTYPE JOIN) (VAR x) (RULES f(x) -> x)")


def test_parse_rejects_variable_lhs():
    with pytest.raises(VariableAsLhsError):
        parse("(VAR x) (RULES x -> a)")


def test_parse_rejects_arity_conflicts():
    with pytest.raises(ArityConflictError):
        parse("(VAR x) (RULES f(x) -> a  f(x, x) -> a)")
    with pytest.raises(ArityConflictError):
        parse("(VAR x) (RULES f(x) -> f)")


def test_parse_rejects_variable_with_arguments():
    with pytest.raises(ParseError):
        parse("(VAR x) (RULES f(x(a)) -> a)")


def test_parse_error_carries_position():
    try:
        parse("(RULES\n  f(a) -> )\n)")
    except ParseError as e:
        assert e.line == 2
        assert e.col > 0
    else:
        pytest.fail("expected a parse error")


def test_parse_errors_on_junk():
    for bad in ("", "fib", "(RULES f(a) -> a", "(WHAT x)", "(VAR x) (RULES a == b)",
                "(RULES f(a) => b)", "(RULES f(a) -> b | a = b)"):
        with pytest.raises(ParseError):
            parse(bad)


def test_comments_are_ignored():
    spec = parse(
        "(COMMENT free text. with, (nested parens) and $trange bytes!)\n"
        "(VAR x)\n(RULES f(x) -> x)\n"
        "(COMMENT trailing)"
    )
    assert len(spec.ctrs.rules) == 1


def test_unterminated_comment_is_an_error():
    with pytest.raises(ParseError, match="unterminated"):
        parse("(COMMENT never closed")


def test_arrow_requires_no_whitespace():
    spec = parse("(VAR x)(RULES f(x)->g(x)|x==a)")
    rule = spec.ctrs.rules[0]
    assert render_rule(rule) == "f(x) -> g(x) | x == a"


def test_hyphen_stays_inside_identifiers():
    spec = parse("(RULES my-fun(a-b) -> a-b)")
    assert {s.name for s in spec.ctrs.symbols} == {"my-fun", "a-b"}


def test_render_examples():
    f = Symbol("f", 2)
    a = Symbol("a", 0)
    assert render(Fun(f, (Var("x"), Fun(a)))) == "f(x, a)"
    assert render(Fun(a)) == "a"


def test_render_parse_roundtrip_random_terms(fib_spec):
    rng = random.Random(41)
    symbols = tuple(fib_spec.ctrs.symbols)
    variables = tuple(Var(n) for n in fib_spec.var_names)
    for _ in range(300):
        t = random_term(rng, 4, symbols=symbols, variables=variables)
        assert parse_term(render(t), fib_spec) == t


def test_corpus_roundtrip():
    assert ALL_CORPUS  # the corpus ships with the repo
    for name in ALL_CORPUS:
        spec = load_corpus(name)
        again = parse(render_system(spec.ctrs))
        assert again.ctrs == spec.ctrs


def test_parse_term_strictness(fib_spec):
    by_name = {s.name: s for s in fib_spec.ctrs.symbols}
    expected = Fun(by_name["fib"], (Fun(by_name["s"], (Fun(by_name["0"]),)),))
    assert parse_term("fib(s(0))", fib_spec) == expected
    assert parse_term("fib ( s(0) )", fib_spec) == expected
    assert parse_term("x", fib_spec) == Var("x")
    with pytest.raises(ParseError, match="unknown symbol"):
        parse_term("nope(0)", fib_spec)
    with pytest.raises(ArityConflictError):
        parse_term("fib(0, 0)", fib_spec)
    with pytest.raises(ParseError):
        parse_term("fib(0) extra", fib_spec)


def test_deep_nesting_is_rejected_not_crashing():
    text = "(RULES " + "f(" * 5000 + "a" + ")" * 5000 + " -> a)"
    with pytest.raises(ParseError, match="nesting"):
        parse(text)


def test_multiple_blocks_accumulate():
    spec = parse(
        "(VAR x)\n(RULES f(x) -> x)\n(VAR y)\n(RULES g(x, y) -> f(x))\n"
        "(CONDITIONTYPE ORIENTED)"
    )
    assert len(spec.ctrs.rules) == 2
    assert spec.var_names == ("x", "y")


def test_missing_conditiontype_defaults_to_oriented():
    spec = parse("(VAR x)(RULES f(x) -> x)")
    assert spec.condition_type == "ORIENTED"


def test_render_empty_system_roundtrips():
    spec = parse("(RULES)")
    assert spec.ctrs.rules == ()
    assert parse(render_system(spec.ctrs)).ctrs == spec.ctrs


def test_fuzz_smoke():
    rng = random.Random(42)
    alphabet = "()|,=->abfxyz_'+* \n\t\x00\xff"
    for _ in range(5000):
        s = "".join(rng.choice(alphabet) for _ in range(rng.randrange(0, 30)))
        try:
            parse(s)
        except ParseError:
            pass
