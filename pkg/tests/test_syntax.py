import pytest

from resmod import corpus
from resmod.logic import Var, is_variant
from resmod.rewrite import alpha_eq
from resmod.syntax import (
    ParseError,
    format_problem,
    format_rule,
    parse_problem,
    parse_prop,
    parse_sequent,
    parse_term,
)


def test_example1_problem():
    p = parse_problem("theory P* | Q.\ntheory -P* | Q.\nclause -Q.\n")
    assert [str(c) for c in p.clauses] == ["P* | Q", "-P* | Q", "-Q"]
    assert p.theory_ids == frozenset({1, 2})
    assert [c.id for c in p.clauses] == [1, 2, 3]


def test_unit_clause():
    p = parse_problem("clause P(a).")
    (c,) = p.clauses
    assert len(c) == 1 and not c.is_one_way


def test_variables_are_upper_case():
    t = parse_term("f(X, a, X_3)")
    assert t.args[0] == Var("X") and t.args[2] == Var("X", 3)


@pytest.mark.parametrize(
    "text, message",
    [
        ("theory P | Q.", "theory clause lacks selected literal"),
        ("clause P* | Q.", "selected literal"),
        ("theory P* | Q*.", "more than one selected literal"),
        ("clause P(a).\nclause P(a, b).", "arities"),
        ("clause P(a)", "expected"),
        ("clause P(.", ""),
    ],
)
def test_parse_errors(text, message):
    with pytest.raises(ParseError) as e:
        parse_problem(text)
    assert message in str(e.value)


def test_error_position():
    with pytest.raises(ParseError) as e:
        parse_problem("clause P.\nclause Q(.")
    assert e.value.line == 2


def test_comments_and_blank_lines():
    p = parse_problem("# header\n\nclause P. # trailing\n")
    assert len(p.clauses) == 1


def test_explicit_rules_get_fresh_ids():
    p = parse_problem("theory P* | Q.\nrule- R -> ~Q.\n")
    ids = [r.id for r in p.system()]
    assert len(set(ids)) == 2 and ids[0] == 1


def test_rule_syntax():
    p = corpus.load("cut_system")
    assert [format_rule(r) for r in p.system()] == ["rule- P -> Q.", "rule+ P -> ~Q."]


def test_prop_precedence_and_binding():
    # disjunctions are always parenthesized
    with pytest.raises(ParseError):
        parse_prop("~P \\/ Q")
    p = parse_prop("forall X. (~P(X) \\/ Q)")
    assert alpha_eq(p, parse_prop("forall Y. (~P(Y) \\/ Q)"))
    assert not alpha_eq(p, parse_prop("forall Y. (~P(X) \\/ Q)"))
    assert str(parse_prop("~~false")) == "~~false"


def test_sequent():
    s = parse_sequent("P, Q |- R")
    assert len(s.left) == 2 and len(s.right) == 1
    assert str(parse_sequent("|- Q")) == "|- Q"


@pytest.mark.parametrize("name", corpus.names())
def test_round_trip(name):
    p = corpus.load(name)
    again = parse_problem(format_problem(p), name)
    assert len(again.clauses) == len(p.clauses)
    for c, d in zip(p.clauses, again.clauses):
        assert is_variant(c, d) and c.selected == d.selected
    assert [format_rule(r) for r in again.system()] == [format_rule(r) for r in p.system()]
