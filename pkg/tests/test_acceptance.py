"""Acceptance criteria, one test group per criterion.

The terminal summary prints one PASS/FAIL line per criterion.  Every check
also asserts it finished in under five seconds.
"""

import time

import pytest

import checks
from resmod import corpus
from resmod.logic import Fn
from resmod.orders import Precedence, SelectNone
from resmod.rewrite import check_disjoint_criterion
from resmod.saturation import PRM, OrderedSelection, Plain, SetOfSupport, Status, enumerate_refutations, saturate
from resmod.sequent import check_proof, cutfree_search, has_cut
from resmod.syntax import parse_problem, parse_proof, parse_sequent
from resmod.workbench import MACHINE_LINE, emit_rules, run
from test_rewrite import bbb_table, same_rules

LIMIT = 5.0


@pytest.fixture(autouse=True)
def under_five_seconds():
    t0 = time.perf_counter()
    yield
    assert time.perf_counter() - t0 < LIMIT


def f_pow(i):
    t = Fn("a")
    for _ in range(i):
        t = Fn("f", (t,))
    return t


C1 = pytest.mark.criterion(1, "example 1 outcome matrix")


@C1
def test_example1_prm_saturates_without_empty_clause():
    out = saturate(corpus.load("example1").clauses, PRM(), 50)
    assert out.status is Status.SATURATED
    assert not any(c.is_empty for c in out.clauses.values())


@C1
def test_example1_sos_refutes():
    assert saturate(corpus.load("example1").clauses, SetOfSupport(frozenset({1, 2})), 50).status is Status.REFUTED


@C1
def test_example1_ordered_refutes():
    pol = OrderedSelection(Precedence(("Q", "P"), ()), SelectNone())
    assert saturate(corpus.load("example1").clauses, pol, 50).status is Status.REFUTED


@C1
def test_example1_plain_refutes():
    assert saturate(corpus.load("example1").clauses, Plain(), 50).status is Status.REFUTED


C2 = pytest.mark.criterion(2, "finite failure versus loop")


@C2
def test_loop_prm_zero_inferences():
    out = saturate(corpus.load("loop").clauses, PRM(), 50)
    assert out.status is Status.SATURATED and out.generated == 0 and not out.trace


@C2
def test_loop_sos_exhausts_budget():
    report = run(corpus.load("loop"), "sos", 20)
    assert MACHINE_LINE.search(report.render()).group(1) == "BUDGET"
    out = report.outcome
    by_step = {t.step: t.clause for t in out.trace}
    for i in range(1, 6):
        (lit,) = by_step[i].literals
        assert lit.positive and lit.atom.pred == "P" and lit.atom.args == (f_pow(i),)
    shown = report.render()
    assert "P(f(a))" in shown and "P(f(f(a)))" in shown


C3 = pytest.mark.criterion(3, "translation golden tables and disjointness verdicts")


@C3
def test_bbb_rules_match_table():
    assert same_rules(corpus.load("example_bbb").system(), bbb_table())
    nullary = corpus.load("example_bbb").system()[-2:]
    assert [str(r.rhs) for r in nullary] == ["false", "~false"]


@C3
def test_bbb_disjointness_passes():
    # expected verdict for the nine-rule table
    assert emit_rules(corpus.load("example_bbb")).splitlines()[-1] == "criterion: PASSES"


@C3
def test_example1_rules_and_verdict():
    lines = emit_rules(corpus.load("example1")).splitlines()
    assert sorted(lines[:2]) == ["rule+ P -> ~Q.", "rule- P -> Q."]
    assert lines[2] == "criterion: FAILS"
    assert not check_disjoint_criterion(corpus.load("example1").system())


C4 = pytest.mark.criterion(4, "cut witness without a cut-free proof")


@C4
def test_cut_proof_checks_and_no_cutfree_proof():
    rules = corpus.load("cut_system").system()
    assert sorted((r.sign.value, str(r.lhs), str(r.rhs)) for r in rules) == [("+", "P", "~Q"), ("-", "P", "Q")]
    goal = parse_sequent("|- Q")
    proof = parse_proof(corpus.CUT_PROOF)
    check_proof(rules, goal, proof)
    assert has_cut(proof)
    assert cutfree_search(rules, goal, 8, (), 3) is None
    other = cutfree_search([], parse_sequent("|- (Q \\/ ~Q)"), 4)
    assert other is not None and not has_cut(other)


C5 = pytest.mark.criterion(5, "finite failure on the higher-order theory")


@C5
def test_bbb_theory_alone_saturates_immediately():
    problem = corpus.load("example_bbb")
    assert all(c.is_one_way for c in problem.clauses)
    out = saturate(problem.clauses, PRM(), 1000)
    assert out.status is Status.SATURATED and out.generated == 0


C6 = pytest.mark.criterion(6, "redundant refutations on intro")


@C6
def test_intro_has_two_refutation_routes():
    refs = enumerate_refutations(corpus.load("intro").clauses, 10)
    assert len(refs) >= 2
    firsts = {str(min((c for c in r.clauses if c.id > 3), key=lambda c: c.id)) for r in refs}
    assert {"Q", "-P"} <= firsts


C7 = pytest.mark.criterion(7, "property suites")


@C7
def test_mgu_laws():
    checks.check_mgu_laws()


@C7
def test_ordering_totality_and_stability():
    checks.check_ground_order()
    assert checks.check_stability(200) == 200


@C7
def test_restriction_subsets():
    checks.check_restriction_subsets()


@C7
def test_refuted_dag_replay():
    checks.check_replay()


@C7
def test_checker_search_coherence():
    checks.check_search_coherence()


@C7
def test_trace_mutation_fuzz():
    assert checks.check_mutation_fuzz(50) == 50


@C7
def test_bitwise_determinism():
    checks.check_determinism()


C8 = pytest.mark.criterion(8, "example aaa with a goal clause")


@C8
def test_aaa_goal_refuted_in_three_steps():
    problem = parse_problem("theory P* | Q.\ntheory P* | -Q.\nclause -P.\n")
    out = saturate(problem.clauses, PRM(), 50)
    assert out.status is Status.REFUTED
    assert out.generated <= 3
    assert [str(c) for c in out.derivation() if c.id > 3] == ["Q", "-Q", "false"]
