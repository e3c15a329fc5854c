"""Independent oracles and property checks shared by the unit and acceptance tests.

Each ``check_*`` function raises ``AssertionError`` on the first violation and
returns how many cases it examined.
"""

from __future__ import annotations

import dataclasses
import itertools
import random

from resmod import corpus
from resmod.logic import (
    Atom,
    Clause,
    Fn,
    Literal,
    Substitution,
    Var,
    apply_substitution,
    is_variant,
    renaming_apart,
    signature,
    try_unify,
    variables,
)
from resmod.orders import Cmp, Precedence, SelectAllNegative, SelectNone, compare_atoms
from resmod.rewrite import RewriteStep, RewriteTrace, Sign, atom
from resmod.saturation import (
    PRM,
    OrderedSelection,
    Plain,
    SetOfSupport,
    Status,
    factors,
    replay_clause,
    replay_derivation,
    resolvents,
    saturate,
)
from resmod.sequent import ProofTree, Sequent, Witness, check_proof, cutfree_search, has_cut, is_valid_proof
from resmod.syntax import parse_proof, parse_sequent
from resmod.workbench import run

X, Y = Var("X"), Var("Y")
a, b = Fn("a"), Fn("b")


def f(t):
    return Fn("f", (t,))


def P(s, t):
    return Atom("P", (s, t))


def terms_upto(depth: int, leaves) -> list:
    """All terms over unary f with the given leaves, up to nesting depth."""
    level = list(leaves)
    out = list(level)
    for _ in range(depth):
        level = [f(t) for t in level]
        out += level
    return out


GROUND = terms_upto(2, [a, b])
OPEN = terms_upto(2, [X, Y, a, b])


def ground_unifiers(s: Atom, t: Atom, vs=(X, Y), universe=GROUND):
    """Every ground substitution over ``universe`` that unifies s and t."""
    for values in itertools.product(universe, repeat=len(vs)):
        tau = Substitution(dict(zip(vs, values)))
        if apply_substitution(tau, s) == apply_substitution(tau, t):
            yield tau


def check_mgu(s: Atom, t: Atom) -> None:
    sigma = try_unify(s, t)
    taus = list(ground_unifiers(s, t))
    if sigma is None:
        assert not taus, f"{s} and {t} have unifier {taus[0]} but unify failed"
        return
    assert apply_substitution(sigma, s) == apply_substitution(sigma, t)
    twice = Substitution({v: apply_substitution(sigma, u) for v, u in sigma.items()})
    assert twice == sigma, f"{sigma} is not idempotent"
    for tau in taus:
        for v in (X, Y):
            assert apply_substitution(tau, apply_substitution(sigma, v)) == apply_substitution(tau, v), (
                f"{tau} does not factor through {sigma}"
            )


def check_mgu_laws(samples: int = 1500, seed: int = 7) -> int:
    rng = random.Random(seed)
    atoms = [P(s, t) for s in OPEN for t in OPEN]
    for _ in range(samples):
        check_mgu(rng.choice(atoms), rng.choice(atoms))
    return samples


ORDER_PREC = Precedence(("P",), ("b", "a", "f"))


def ground_atoms() -> list[Atom]:
    return [P(s, t) for s in GROUND for t in GROUND]


def check_ground_order() -> int:
    """Totality, antisymmetry, irreflexivity and transitivity on ground atoms."""
    atoms = ground_atoms()
    table = {}
    for x in atoms:
        for y in atoms:
            r = compare_atoms(ORDER_PREC, x, y)
            assert r is not Cmp.INCOMPARABLE, f"{x} vs {y} incomparable"
            assert (r is Cmp.EQ) == (x == y)
            table[x, y] = r
    for x, y in table:
        flip = {Cmp.LT: Cmp.GT, Cmp.GT: Cmp.LT, Cmp.EQ: Cmp.EQ}[table[x, y]]
        assert table[y, x] is flip
    greater = {x: {y for y in atoms if table[x, y] is Cmp.GT} for x in atoms}
    for x in atoms:
        for y in greater[x]:
            assert greater[y] <= greater[x], f"transitivity fails at {x} > {y}"
    return len(table)


def random_term(rng: random.Random, depth: int):
    if depth == 0 or rng.random() < 0.35:
        return rng.choice([X, Y, a, b])
    return f(random_term(rng, depth - 1))


def random_atom(rng: random.Random) -> Atom:
    return P(random_term(rng, 3), random_term(rng, 3))


def check_stability(trials: int = 200, seed: int = 11) -> int:
    rng = random.Random(seed)
    done = 0
    while done < trials:
        s, t = random_atom(rng), random_atom(rng)
        if compare_atoms(ORDER_PREC, s, t) is not Cmp.LT:
            continue
        sigma = Substitution({X: random_term(rng, 2), Y: random_term(rng, 2)})
        got = compare_atoms(ORDER_PREC, apply_substitution(sigma, s), apply_substitution(sigma, t))
        assert got is Cmp.LT, f"{s} < {t} but not under {sigma}: {got}"
        done += 1
    return done


def corpus_policies(clauses):
    sig = signature(clauses)
    theory = frozenset(c.id for c in clauses if c.is_one_way) or frozenset({clauses[0].id})
    return [
        SetOfSupport(theory),
        PRM(),
        OrderedSelection(Precedence.default(sig), SelectNone()),
        OrderedSelection(Precedence.default(sig), SelectAllNegative()),
    ]


def corpus_clause_sets():
    """Each clausal corpus problem with a few plain-derived clauses added."""
    for name in corpus.names():
        problem = corpus.load(name)
        if not problem.clauses:
            continue
        out = saturate(problem.clauses, Plain(), 12)
        derived = [c for c in out.clauses.values() if c.id > len(problem.clauses)]
        yield name, problem.clauses + derived[:8]


def _covered(sub, full) -> bool:
    return all(any(is_variant(c, d) for d in full) for c in sub)


def check_restriction_subsets() -> int:
    pairs = 0
    for _, clauses in corpus_clause_sets():
        for pol in corpus_policies(clauses):
            for c1 in clauses:
                for c2 in clauses:
                    c2r = apply_substitution(renaming_apart(c2, variables(c1)), c2)
                    assert _covered(resolvents(c1, c2r, pol), resolvents(c1, c2r, Plain()))
                    pairs += 1
                assert _covered(factors(c1, pol), factors(c1, Plain()))
    return pairs


def corpus_runs(budget: int = 60):
    for name in corpus.names():
        problem = corpus.load(name)
        if not problem.clauses:
            continue
        for pol in [Plain()] + corpus_policies(problem.clauses):
            yield name, pol, saturate(problem.clauses, pol, budget)


def check_replay() -> int:
    refuted = 0
    for name, pol, out in corpus_runs():
        for c in out.clauses.values():
            replay_clause(c, out.clauses)
        if out.status is Status.REFUTED:
            replay_derivation(out.derivation(), out.clauses)
            refuted += 1
    assert refuted >= 5
    return refuted


def check_policy_ancestry() -> int:
    n = 0
    for name, pol, out in corpus_runs():
        for c in out.clauses.values():
            o = c.origin
            if not hasattr(o, "parents"):
                if hasattr(o, "parent") and isinstance(pol, (SetOfSupport, PRM)):
                    parent = out.clauses[o.parent]
                    if isinstance(pol, PRM):
                        assert not parent.is_one_way
                    else:
                        assert parent.id not in pol.theory
                continue
            n += 1
            parents = [out.clauses[i] for i in o.parents]
            if isinstance(pol, SetOfSupport):
                assert any(p.id not in pol.theory for p in parents), f"{name}: {c} from two theory clauses"
                assert c.id not in pol.theory
            if isinstance(pol, PRM):
                assert not c.is_one_way
                assert not all(p.is_one_way for p in parents), f"{name}: {c} from two one-way clauses"
    return n


def check_saturated_genuine() -> int:
    n = 0
    for name, pol, out in corpus_runs():
        if out.status is not Status.SATURATED:
            continue
        n += 1
        kept = list(out.clauses.values())
        for c1 in kept:
            new = factors(c1, pol)
            for c2 in kept:
                new += resolvents(c1, apply_substitution(renaming_apart(c2, variables(c1)), c2), pol)
            for c in new:
                assert any(is_variant(c, d) for d in kept), f"{name}/{pol}: {c} missing after saturation"
    return n


def check_determinism() -> int:
    runs = 0
    for name in ("intro", "example1", "loop", "example_aaa_goal"):
        problem = corpus.load(name)
        for method in ("plain", "sos", "ordered", "prm"):
            if method == "sos" and not problem.theory_ids:
                continue
            first = run(problem, method, 40).render()
            second = run(corpus.load(name), method, 40).render()
            assert first.encode() == second.encode(), f"{name}/{method} differs between runs"
            runs += 1
    return runs


def coherence_goals():
    """(system, goal, terms) triples that have cut-free proofs."""
    aaa = corpus.load("example_aaa").system()
    bbb = corpus.load("example_bbb").system()
    from resmod.rewrite import PolarizedRule

    shift = [PolarizedRule(Sign.NEG, Atom("P", (f(X),)), atom("Q", X), 1)]
    return [
        ([], parse_sequent("|- (Q \\/ ~Q)"), []),
        ([], parse_sequent("P |- P"), []),
        ([], parse_sequent("false |- Q"), []),
        ([], parse_sequent("~~P |- P"), []),
        ([], parse_sequent("forall X. P(X) |- P(a)"), [a]),
        ([], parse_sequent("|- forall X. (P(X) \\/ ~P(X))"), []),
        ([], parse_sequent("(P \\/ Q) |- Q, P"), []),
        (shift, parse_sequent("P(f(a)) |- Q(a)"), []),
        (aaa, parse_sequent("|- P"), []),
        (bbb, parse_sequent("|- eps(null(0))"), []),
        (bbb, parse_sequent("eps(null(s(a))) |-"), []),
    ]


def check_search_coherence(depth: int = 6) -> int:
    for rules, goal, terms in coherence_goals():
        proof = cutfree_search(rules, goal, depth, terms, 3)
        assert proof is not None, f"no proof of {goal}"
        check_proof(rules, goal, proof)
        assert not has_cut(proof)
    return len(coherence_goals())


def _trace_sites(proof: ProofTree, path=()):
    for name, w in proof.witnesses.items():
        for k in range(len(w.trace.steps)):
            yield path, name, k
    for i, kid in enumerate(proof.children):
        yield from _trace_sites(kid, path + (i,))


def _edit(proof: ProofTree, path, name, new_steps) -> ProofTree:
    if path:
        kids = list(proof.children)
        kids[path[0]] = _edit(kids[path[0]], path[1:], name, new_steps)
        return dataclasses.replace(proof, children=tuple(kids))
    w = proof.witnesses[name]
    ws = dict(proof.witnesses)
    ws[name] = Witness(w.target, RewriteTrace(tuple(new_steps)))
    return dataclasses.replace(proof, witnesses=ws)


def _node(proof, path):
    for i in path:
        proof = proof.children[i]
    return proof


def mutate_step(step: RewriteStep, kind: str, rng: random.Random, rule_ids) -> RewriteStep | None:
    if kind == "rule":
        others = [r for r in rule_ids if r != step.rule] + [999]
        return dataclasses.replace(step, rule=rng.choice(others))
    if kind == "path":
        return dataclasses.replace(step, path=step.path + (rng.choice([0, 1]),))
    if kind == "path-up" and step.path:
        return dataclasses.replace(step, path=step.path[:-1])
    if kind == "sub":
        extra = dict(step.subst)
        v = rng.choice([X, Y, Var("Z")])
        old = extra.get(v)
        extra[v] = rng.choice([t for t in (a, b, f(a)) if t != old])
        return dataclasses.replace(step, subst=Substitution(extra))
    return None


def fuzz_cases():
    """(rules, goal, accepted proof) triples whose proofs carry non-empty traces."""
    cut = corpus.load("cut_system")
    from resmod.rewrite import PolarizedRule

    shift = [PolarizedRule(Sign.NEG, Atom("P", (f(X),)), atom("Q", X), 1)]
    shift_proof = ProofTree("axiom", witnesses={
        "left": Witness(atom("Q", a), RewriteTrace((RewriteStep((), 1, Substitution({X: a})),))),
        "right": Witness(atom("Q", a)),
    })
    aaa = corpus.load("example_aaa").system()
    aaa_goal = parse_sequent("|- P")
    return [
        (cut.system(), parse_sequent("|- Q"), parse_proof(corpus.CUT_PROOF)),
        (shift, parse_sequent("P(f(a)) |- Q(a)"), shift_proof),
        (aaa, aaa_goal, cutfree_search(aaa, aaa_goal, 6)),
    ]


def check_mutation_fuzz(n: int = 50, seed: int = 3) -> int:
    rng = random.Random(seed)
    cases = fuzz_cases()
    rejected = 0
    kinds = ["rule", "path", "path-up", "sub", "delete", "duplicate"]
    while rejected < n:
        rules, goal, proof = rng.choice(cases)
        assert is_valid_proof(rules, goal, proof)
        path, name, k = rng.choice(list(_trace_sites(proof)))
        steps = list(_node(proof, path).witnesses[name].trace.steps)
        kind = rng.choice(kinds)
        if kind == "delete":
            new = steps[:k] + steps[k + 1:]
        elif kind == "duplicate":
            new = steps[:k + 1] + steps[k:]
        else:
            step = mutate_step(steps[k], kind, rng, [r.id for r in rules])
            if step is None or step == steps[k]:
                continue
            new = steps[:k] + [step] + steps[k + 1:]
        bad = _edit(proof, path, name, new)
        assert not is_valid_proof(rules, goal, bad), f"mutation {kind} at {path}/{name}[{k}] accepted"
        rejected += 1
    return rejected


def weakened(proof: ProofTree, goal: Sequent, extra) -> tuple[Sequent, ProofTree]:
    bigger = Sequent(goal.left + (extra,), goal.right)
    return bigger, ProofTree("weak-left", len(goal.left), children=(proof,))
